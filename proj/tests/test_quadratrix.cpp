#include "doctest.h"

#include "ilw/lambertw.hpp"
#include "ilw/quadratrix.hpp"

#include <cmath>
#include <complex>

using std::complex;
namespace {
using cd = complex<double>;
constexpr double pi = 3.14159265358979323846;
} // namespace

TEST_CASE("quadratrix parameterization") {
    // Vertex: removable singularity at kappa = 0.
    for (double delta : {0.25, 0.5, 1.0, 2.0}) {
        auto p = ilw::quadratrix(0.0, delta);
        CHECK(p.zeta == cd(1.0 / (2.0 * delta), 0.0));
    }
    // cot(pi/2) = 0 makes the curve purely imaginary at kappa = pi/(4 delta).
    for (double delta : {0.5, 1.0}) {
        auto p = ilw::quadratrix(pi / (4.0 * delta), delta);
        CHECK(std::abs(p.zeta.real()) < 1e-14);
        CHECK(p.zeta.imag() == doctest::Approx(pi / (4.0 * delta)).epsilon(1e-14));
    }
    auto p = ilw::quadratrix(0.5, 0.5);
    CHECK(p.zeta.real() == doctest::Approx(0.5 * std::cos(0.5) / std::sin(0.5)).epsilon(1e-15));
    CHECK(p.zeta.imag() == 0.5);
}

TEST_CASE("quadratrix defining property arg(2 delta zeta) = 2 delta kappa") {
    for (double delta : {0.3, 0.5, 1.0}) {
        double lim = pi / (2.0 * delta);
        for (int i = -40; i <= 40; ++i) {
            double kappa = 0.995 * lim * i / 40.0;
            auto p = ilw::quadratrix(kappa, delta);
            double want = 2.0 * delta * kappa;
            CHECK(std::arg(2.0 * delta * p.zeta) == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("quadratrix derivative matches finite differences") {
    double h = 1e-6;
    for (double kappa : {1e-7, 1e-3, 0.4, 1.2, -0.9}) {
        auto p = ilw::quadratrix(kappa, 0.5);
        cd fd = (ilw::quadratrix(kappa + h, 0.5).zeta -
                 ilw::quadratrix(kappa - h, 0.5).zeta) / (2.0 * h);
        CHECK(std::abs(p.zeta_prime - fd) < 1e-8 * (1.0 + std::abs(fd)));
    }
}

TEST_CASE("quadratrix domain errors") {
    CHECK_THROWS_AS(ilw::quadratrix(pi, 0.5), std::domain_error);
    CHECK_THROWS_AS(ilw::quadratrix(-pi, 0.5), std::domain_error);
    CHECK_THROWS_AS(ilw::quadratrix(0.1, -1.0), std::domain_error);
}

TEST_CASE("zeta_max and kappa_max") {
    // Reference value computed with 40-digit arithmetic.
    cd zm = ilw::zeta_max(0.5, 1.0);
    CHECK(std::abs(zm - cd(0.31813150520476413531, 1.3372357014306894089)) < 1e-14);
    // E(zeta_max) = u_max, and the arc stays inside the parameter range.
    for (auto [delta, umax] : {std::pair{0.5, 1.0}, {1.0, 0.7}, {0.25, 2.0}}) {
        cd z = ilw::zeta_max(delta, umax);
        auto e = ilw::level_E(z, delta);
        CHECK(e.value == doctest::Approx(umax).epsilon(1e-12));
        CHECK(e.on_curve);
        double km = ilw::kappa_max(delta, umax);
        CHECK(km > 0.0);
        CHECK(2.0 * delta * km < pi);
        // zeta_max lies on the curve: same point as quadratrix(kappa_max).
        CHECK(std::abs(ilw::quadratrix(km, delta).zeta - z) < 1e-12 * (1.0 + std::abs(z)));
    }
}

TEST_CASE("level_E on the curve") {
    // Base point: E(1/(2 delta)) = 0.
    for (double delta : {0.5, 1.0}) {
        auto e = ilw::level_E(cd(1.0 / (2.0 * delta), 0.0), delta);
        CHECK(std::abs(e.value) < 1e-15);
        CHECK(e.on_curve);
    }
    // Frozen midpoint value (kappa = kappa_max/2, delta = 0.5, u_max = 1).
    double km = ilw::kappa_max(0.5, 1.0);
    auto mid = ilw::level_E(ilw::quadratrix(km / 2.0, 0.5).zeta, 0.5);
    CHECK(mid.on_curve);
    CHECK(mid.value == doctest::Approx(0.22930695571427960).epsilon(1e-12));
    // E increases monotonically along the upper arc from 0 to u_max.
    double prev = -1e-300;
    for (int i = 0; i <= 64; ++i) {
        double kappa = km * i / 64.0;
        auto e = ilw::level_E(ilw::quadratrix(kappa, 0.5).zeta, 0.5);
        CHECK(e.on_curve);
        CHECK(e.value > prev);
        CHECK(e.value <= 1.0 + 1e-12);
        prev = e.value;
    }
    CHECK_THROWS_AS(ilw::level_E(cd(0.0, 0.0), 0.5), std::domain_error);
}

TEST_CASE("level_E_prime matches finite differences of E along the curve") {
    double h = 1e-6;
    for (double kappa : {0.3, 0.8, 1.2}) {
        auto p = ilw::quadratrix(kappa, 0.5);
        cd ep = ilw::level_E_prime(p.zeta, 0.5);
        double fd = (ilw::level_E(ilw::quadratrix(kappa + h, 0.5).zeta, 0.5).value -
                     ilw::level_E(ilw::quadratrix(kappa - h, 0.5).zeta, 0.5).value) / (2.0 * h);
        // dE/dkappa = E'(zeta) zeta'(kappa), real and positive on the upper arc.
        cd dEdk = ep * p.zeta_prime;
        CHECK(std::abs(dEdk.imag()) < 1e-10);
        CHECK(dEdk.real() > 0.0);
        CHECK(dEdk.real() == doctest::Approx(fd).epsilon(1e-7));
    }
}

TEST_CASE("g_inverse endpoint identities and round trip") {
    for (double kappa : {0.3, 0.8, 1.2}) {
        cd z = ilw::quadratrix(kappa, 0.5).zeta;
        // G^{-1}_{-1}(0) = zeta and G^{-1}_0(0) = conj(zeta).
        CHECK(std::abs(ilw::g_inverse(-1, 0.0, z, 0.5) - z) < 1e-12);
        CHECK(std::abs(ilw::g_inverse(0, 0.0, z, 0.5) - std::conj(z)) < 1e-12);
    }
    // Frozen value (40-digit oracle) plus the G round trip at 1e-11.
    cd z8 = ilw::quadratrix(0.8, 0.5).zeta;
    cd gi = ilw::g_inverse(-1, 0.3, z8, 0.5);
    CHECK(std::abs(gi - cd(0.67860629008534133, 0.25279870781922456)) < 1e-12);
    for (int n : {-1, 0, -2, 1}) {
        for (double U : {0.05, 0.3, 0.9}) {
            cd eta = ilw::g_inverse(n, U, z8, 0.5);
            cd back = ilw::g_fun(eta, z8, 0.5);
            CHECK(std::abs(back - cd(U, 0.0)) < 1e-11);
        }
    }
    CHECK_THROWS_AS(ilw::g_inverse(-1, 0.0, cd(0.0, 0.0), 0.5), std::domain_error);
}

TEST_CASE("amplitude values and the turning-point singularity") {
    cd z8 = ilw::quadratrix(0.8, 0.5).zeta;
    // Frozen direct evaluation (40-digit oracle, branch 0 at U = 0).
    cd a0 = ilw::amplitude(0, 0.0, z8, 0.5);
    CHECK(std::abs(a0 - cd(0.57712759358300308, -1.0048510999088086)) < 1e-12);
    // Extraneous branch stays finite across the whole level range.
    for (double U = 0.0; U <= 1.0; U += 0.05) {
        cd am2 = ilw::amplitude(-2, U, z8, 0.5);
        CHECK(std::isfinite(am2.real()));
        CHECK(std::isfinite(am2.imag()));
    }
    // At U = E(zeta) the scattering branches hit 1 + W = 0.
    double E = ilw::level_E(z8, 0.5).value;
    CHECK_THROWS_AS(ilw::amplitude(-1, E, z8, 0.5), std::domain_error);
    CHECK_THROWS_AS(ilw::amplitude(0, E, z8, 0.5), std::domain_error);
}

TEST_CASE("amplitude branch pair in allowed and forbidden regions") {
    cd z8 = ilw::quadratrix(0.8, 0.5).zeta;
    double E = ilw::level_E(z8, 0.5).value;
    // Allowed region U > E: the Lambert argument lies in (-1/e, 0) so both
    // scattering branches are real under the root before continuation.
    double Ua = E + 0.3;
    cd arga = -2.0 * 0.5 * z8 * std::exp(-2.0 * 0.5 * (z8 + Ua));
    cd w0 = ilw::lambert_w(0, cd(arga.real(), 0.0));
    CHECK(arga.real() > -std::exp(-1.0));
    CHECK(std::abs(w0.imag()) < 1e-12);
    CHECK(w0.real() > -1.0);
    CHECK(w0.real() < 0.0);
    // Forbidden region U < E: conjugate-pair Lambert values.
    double Uf = 0.5 * E;
    cd arg = -2.0 * 0.5 * z8 * std::exp(-2.0 * 0.5 * (z8 + Uf));
    cd wm = ilw::lambert_w(-1, cd(arg.real(), 0.0));
    cd wp = ilw::lambert_w(0, cd(arg.real(), 0.0));
    CHECK(arg.real() < -std::exp(-1.0));
    CHECK(std::abs(std::conj(wm) - wp) < 1e-12 * (1.0 + std::abs(wm)));
}
