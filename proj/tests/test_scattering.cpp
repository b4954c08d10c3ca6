#include "doctest.h"

#include <ilw/profile.hpp>
#include <ilw/quadratrix.hpp>
#include <ilw/scattering.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

using namespace ilw;

namespace {

AdmissibleProfile sech2_profile() {
    ProfileSpec spec;
    spec.kind = "sech2";
    return build_profile(spec);
}

} // namespace

TEST_CASE("phase-space count at the vertex matches the reference value") {
    auto prof = sech2_profile();
    // Independent 30-digit quadrature of the branch-difference integral.
    const double R0 = weyl_R(prof, std::complex<double>(1.0, 0.0), 0.5);
    CHECK(R0 == doctest::Approx(4.56755329960243343).epsilon(1e-10));

    const double R0_d1 = weyl_R(prof, std::complex<double>(0.5, 0.0), 1.0);
    CHECK(R0_d1 == doctest::Approx(3.31888918478068368).epsilon(1e-10));
}

TEST_CASE("phase-space count: frozen interior value, top-of-curve zero, monotonicity") {
    auto prof = sech2_profile();
    const double delta = 0.5;
    const double km = kappa_max(delta, prof.u_max);

    auto R_at = [&](double kappa) {
        return weyl_R(prof, quadratrix(kappa, delta).zeta, delta);
    };

    CHECK(R_at(0.8) == doctest::Approx(1.93072824285703900).epsilon(1e-10));

    // At the top of the spectral curve the allowed region degenerates to a point.
    const double Rtop = weyl_R(prof, zeta_max(delta, prof.u_max), delta);
    CHECK(std::abs(Rtop) <= 1e-10);

    CHECK(R_at(0.25 * km) > R_at(0.5 * km));
    CHECK(R_at(0.5 * km) > R_at(0.75 * km));
    CHECK(R_at(0.99 * km) > 0.0);
}

TEST_CASE("counting density: frozen values and derivative consistency with the count") {
    auto prof = sech2_profile();
    const double delta = 0.5;
    const double km = kappa_max(delta, prof.u_max);

    CHECK(weyl_density(prof, 0.8, delta) == doctest::Approx(3.46036523030726915).epsilon(1e-9));
    CHECK(weyl_density(prof, 0.05, delta) == doctest::Approx(3.16030628662092460).epsilon(1e-9));

    // rho = -dR/dkappa along the curve: central difference cross-check.
    const double h = 1e-4;
    for (double kappa : {0.3, 0.8, 1.1}) {
        const double Rp = weyl_R(prof, quadratrix(kappa + h, delta).zeta, delta);
        const double Rm = weyl_R(prof, quadratrix(kappa - h, delta).zeta, delta);
        const double fd = -(Rp - Rm) / (2.0 * h);
        const double rho = weyl_density(prof, kappa, delta);
        CHECK(rho == doctest::Approx(fd).epsilon(2e-6));
    }

    // Density vanishes at the top of the curve and stays positive inside.
    CHECK(std::abs(weyl_density(prof, km, delta)) <= 1e-8);
    CHECK(weyl_density(prof, 0.0, delta) > 0.0);
    CHECK(weyl_density(prof, 0.5 * km, delta) > 0.0);

    CHECK_THROWS_AS((void)weyl_density(prof, -0.1, delta), std::domain_error);
    CHECK_THROWS_AS((void)weyl_density(prof, km * 1.5, delta), std::domain_error);
}

TEST_CASE("count equals the integrated density (fundamental-theorem consistency)") {
    auto prof = sech2_profile();
    const double delta = 0.5;
    const double km = kappa_max(delta, prof.u_max);
    using boost::math::quadrature::gauss_kronrod;

    for (double frac : {0.2, 0.6}) {
        const double kappa = frac * km;
        const double R = weyl_R(prof, quadratrix(kappa, delta).zeta, delta);
        const double integral = gauss_kronrod<double, 31>::integrate(
            [&](double k) { return weyl_density(prof, k, delta); }, kappa, km, 12, 1e-11);
        CHECK(std::abs(R - integral) <= 1e-8);
    }
}

TEST_CASE("tail phases: frozen values, symmetry, vertex limit") {
    auto prof = sech2_profile();
    const double delta = 0.5;

    const auto z03 = quadratrix(0.3, delta).zeta;
    const auto z08 = quadratrix(0.8, delta).zeta;

    CHECK(tail_theta(prof, z03, +1, delta) == doctest::Approx(0.76186315722371252).epsilon(1e-9));
    CHECK(tail_theta(prof, z08, +1, delta) == doctest::Approx(1.18605804706261899).epsilon(1e-9));

    // Even profile: the two tail phases coincide.
    for (double kappa : {0.2, 0.8, 1.2}) {
        const auto z = quadratrix(kappa, delta).zeta;
        const double tp = tail_theta(prof, z, +1, delta);
        const double tm = tail_theta(prof, z, -1, delta);
        CHECK(tp == doctest::Approx(tm).epsilon(1e-10));
        CHECK(tp > 0.0);
    }

    // Vertex of the curve: the phase vanishes identically.
    CHECK(tail_theta(prof, std::complex<double>(1.0, 0.0), +1, delta) == 0.0);
}

TEST_CASE("time invariance of the count under the pre-breaking flow") {
    auto prof = sech2_profile();
    const double delta = 0.5;
    for (double kappa : {0.3, 0.8}) {
        const auto z = quadratrix(kappa, delta).zeta;
        const double R0 = weyl_R(prof, z, delta);
        for (double t : {0.1, 0.3}) {
            const double Rt = weyl_R_evolved(prof, z, delta, t);
            CHECK(std::abs(Rt - R0) <= 1e-8 * (1.0 + std::abs(R0)));
        }
    }
    // Vertex value is also preserved.
    const double R0 = weyl_R(prof, std::complex<double>(1.0, 0.0), delta);
    const double Rt = weyl_R_evolved(prof, std::complex<double>(1.0, 0.0), delta, 0.3);
    CHECK(std::abs(Rt - R0) <= 1e-8 * (1.0 + std::abs(R0)));
}

TEST_CASE("right tail phase evolves linearly in t with the dispersion rate") {
    auto prof = sech2_profile();
    const double delta = 0.5;
    for (double kappa : {0.3, 0.8, 1.2}) {
        const auto z = quadratrix(kappa, delta).zeta;
        const double th0 = tail_theta(prof, z, +1, delta);
        const std::complex<double> shifted = z - 1.0 / (2.0 * delta);
        const double rate = std::imag(shifted * shifted);
        for (double t : {0.1, 0.3}) {
            const double tht = tail_theta_evolved(prof, z, +1, delta, t);
            CHECK(tht == doctest::Approx(th0 - rate * t).epsilon(1e-8));
        }
    }
}

TEST_CASE("discrete data: quantization condition and norming constants") {
    auto prof = sech2_profile();
    const double delta = 0.5;
    const double R0 = weyl_R(prof, std::complex<double>(1.0, 0.0), delta);
    const double km = kappa_max(delta, prof.u_max);

    SUBCASE("single state sits at the half-count level") {
        auto data = modified_data(prof, 1, delta);
        REQUIRE(data.N == 1);
        CHECK(data.eps == doctest::Approx(R0 / M_PI).epsilon(1e-12));
        const double R1 = weyl_R(prof, data.eigen[0].zeta, delta);
        CHECK(R1 == doctest::Approx(0.5 * R0).epsilon(1e-9));
        CHECK(data.log_c[0] > 0.0);
    }

    SUBCASE("eight states are interior, ordered, and consistent") {
        auto data = modified_data(prof, 8, delta);
        REQUIRE(data.N == 8);
        CHECK(data.delta == delta);
        CHECK(data.eps == doctest::Approx(R0 / (8.0 * M_PI)).epsilon(1e-12));
        for (int n = 0; n < 8; ++n) {
            CHECK(data.eigen[n].kappa > 0.0);
            CHECK(data.eigen[n].kappa < km);
            const double Rn = weyl_R(prof, data.eigen[n].zeta, delta);
            const double target = R0 * (n + 0.5) / 8.0;
            CHECK(std::abs(Rn - target) <= 1e-9 * R0);
            CHECK(std::isfinite(data.log_c[n]));
            // Norming constant from the right tail phase (exponentially large,
            // hence log domain).
            const double th = tail_theta(prof, data.eigen[n].zeta, +1, delta);
            CHECK(data.log_c[n] == doctest::Approx(2.0 * th / data.eps).epsilon(1e-9));
            CHECK(data.log_c[n] > 0.0);
        }
        // Counting from the top of the curve: higher n = smaller count level = larger kappa.
        for (int n = 1; n < 8; ++n)
            CHECK(data.eigen[n].kappa < data.eigen[n - 1].kappa);
    }
}

TEST_CASE("serialized data round-trips exactly") {
    auto prof = sech2_profile();
    auto data = modified_data(prof, 4, 0.5);
    const std::string text = serialize(data);
    auto back = parse_scattering(text);

    REQUIRE(back.N == data.N);
    CHECK(back.delta == data.delta);
    CHECK(back.eps == data.eps);
    for (int n = 0; n < data.N; ++n) {
        CHECK(back.eigen[n].kappa == data.eigen[n].kappa);
        CHECK(back.log_c[n] == data.log_c[n]);
        CHECK(std::abs(back.eigen[n].zeta - data.eigen[n].zeta) <= 1e-14);
    }

    CHECK_THROWS_AS((void)parse_scattering("not a header\n"), std::runtime_error);
}
