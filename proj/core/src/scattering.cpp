#include "ilw/scattering.hpp"

#include "ilw/lambertw.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace ilw {

namespace {

using cd = std::complex<double>;
using boost::math::quadrature::gauss_kronrod;
constexpr double pi = 3.14159265358979323846;
constexpr double kFarBound = 30.0; // matches the profile validation grid

double quad(const std::function<double(double)>& f, double a, double b) {
    if (!(b > a)) return 0.0;
    return gauss_kronrod<double, 15>::integrate(f, a, b, 12, 1e-10);
}

// Lambert-W argument at profile value U, snapped to the negative real axis
// exactly as the curve geometry dictates.
cd wkb_arg_u(cd zeta, double delta, double U) {
    cd a = -2.0 * delta * zeta * std::exp(-2.0 * delta * (zeta + U));
    if (std::abs(a.imag()) <= 1e-13 * std::abs(a.real())) a = cd(a.real(), 0.0);
    return a;
}

struct Medium {
    std::function<double(double)> u; // profile at the evaluation time
    double x_minus = 0.0;            // turning points (or clamp bounds)
    double x_plus = 0.0;
    bool clamped = false;            // level reaches past the grid bounds
    double x_ref = 0.0;              // center used for clamp bounds
};

Medium make_medium(const AdmissibleProfile& profile, cd zeta, double delta, double t) {
    LevelE e = level_E(zeta, delta);
    Medium m;
    m.x_ref = profile.x_max + 2.0 * profile.u_max * t;
    if (t == 0.0) {
        m.u = [&profile](double x) { return profile.u0(x); };
    } else {
        m.u = [&profile, t](double x) { return burgers_eval(profile, x, t); };
    }
    if (e.value <= 0.0) {
        // Vertex noise floor: the level vanishes to rounding, every point is
        // classically allowed, and the turning points sit past the grid.
        m.x_minus = profile.x_max - kFarBound;
        m.x_plus = profile.x_max + kFarBound + 2.0 * profile.u_max * t;
        m.clamped = true;
        return m;
    }
    TurningPoints tp = turning_points_level(profile, e.value);
    // Level sets of the characteristic flow translate at twice the level.
    m.x_minus = tp.x_minus + 2.0 * e.value * t;
    m.x_plus = tp.x_plus + 2.0 * e.value * t;
    m.clamped = tp.clamped;
    return m;
}

// Integrand of the eigenvalue count: W_0 - W_{-1} at the WKB argument,
// real in the allowed region.
double count_integrand(cd zeta, double delta, double U) {
    if (zeta.imag() <= 1e-14 && U < 1e-12) {
        // Vertex of the curve: the argument sits within O(U) of the branch
        // point, where the rounded exponential leaves sqrt(eps) noise in the
        // branch difference. Use the branch-point expansion directly.
        double mu = -std::expm1(-2.0 * delta * U); // distance to the branch point
        double p = std::sqrt(2.0 * mu);
        return 2.0 * p + (11.0 / 36.0) * p * p * p;
    }
    cd a = wkb_arg_u(zeta, delta, U);
    cd d = lambert_w(0, a) - lambert_w(-1, a);
    return d.real();
}

double weyl_R_impl(const AdmissibleProfile&, const Medium& m, cd zeta, double delta) {
    double xm = m.x_minus, xp = m.x_plus;
    if (!(xp > xm)) return 0.0;
    auto f = [&](double x) { return count_integrand(zeta, delta, m.u(x)); };
    double mid = 0.5 * (xm + xp);
    // Square-root endpoint behavior: substitute x = x_- + s^2 / x_+ - s^2.
    double r = 0.0;
    double sm = std::sqrt(mid - xm);
    r += quad([&](double s) { return 2.0 * s * f(xm + s * s); }, 0.0, sm);
    double sp = std::sqrt(xp - mid);
    r += quad([&](double s) { return 2.0 * s * f(xp - s * s); }, 0.0, sp);
    if (m.clamped) {
        // The allowed region continues past the clamp bounds; the integrand
        // decays like sqrt(u) there. Map the half lines with x = b + s/(1-s).
        // The exact U -> 0 limit of the integrand has zero real part, but the
        // branch-point cancellation leaves O(sqrt(eps)) noise; subtract the
        // computed limit so the mapped integrand truly decays to zero.
        const double f0 = count_integrand(zeta, delta, 0.0);
        r += quad([&](double s) {
            double den = 1.0 - s;
            return (f(xp + s / den) - f0) / (den * den);
        }, 0.0, 1.0);
        r += quad([&](double s) {
            double den = 1.0 - s;
            return (f(xm - s / den) - f0) / (den * den);
        }, 0.0, 1.0);
    }
    return r / (4.0 * delta);
}

double tail_q(cd zeta, double delta, double U) {
    cd a = wkb_arg_u(zeta, delta, U);
    if (a.imag() == 0.0) {
        // On the curve, e a + 1 = -expm1(2 delta (E - U)); computing the
        // branch-point distance through the level keeps full relative
        // accuracy where the generic solver would lose sqrt(mu) digits.
        double mu = std::expm1(2.0 * delta * (level_E(zeta, delta).value - U));
        if (mu >= 0.0 && mu <= 1e-5) {
            auto pser = [](double m) {
                double p = std::sqrt(2.0 * m);
                return p - (11.0 / 72.0) * p * p * p;
            };
            double mu0 = std::expm1(2.0 * delta * level_E(zeta, delta).value);
            if (mu0 <= 1e-5) {
                // Vertex-adjacent point: q vanishes identically at U = 0, so
                // anchor the series there. Otherwise the rounding error of
                // the level leaves a constant offset that the infinite tail
                // maps amplify without bound.
                return (pser(mu0) - pser(mu)) / (2.0 * delta);
            }
            return zeta.imag() - pser(mu) / (2.0 * delta);
        }
    }
    cd w = lambert_w(-1, a);
    return (zeta + w / (2.0 * delta)).imag();
}

double tail_theta_impl(const Medium& m, cd zeta, double delta, int side) {
    double kappa = zeta.imag();
    if (kappa <= 1e-14) return 0.0; // vertex: the integrand vanishes identically
    auto q = [&](double x) { return tail_q(zeta, delta, m.u(x)); };
    double theta = 0.0, x0 = 0.0;
    if (side > 0) {
        x0 = m.x_plus;
        theta = kappa * x0;
        // Square-root derivative at the turning point, then fast decay.
        theta += quad([&](double s) { return 2.0 * s * q(x0 + s * s); }, 0.0, 1.0);
        theta += quad([&](double s) {
            double den = 1.0 - s;
            return q(x0 + 1.0 + s / den) / (den * den);
        }, 0.0, 1.0);
    } else {
        x0 = m.x_minus;
        theta = -kappa * x0;
        theta += quad([&](double s) { return 2.0 * s * q(x0 - s * s); }, 0.0, 1.0);
        theta += quad([&](double s) {
            double den = 1.0 - s;
            return q(x0 - 1.0 - s / den) / (den * den);
        }, 0.0, 1.0);
    }
    return theta;
}

} // namespace

double wkb_band_integrand(cd zeta, double delta, double u) {
    cd a = wkb_arg_u(zeta, delta, u);
    cd wm = lambert_w(-1, a), w0 = lambert_w(0, a);
    return (wm / (1.0 + wm) - w0 / (1.0 + w0)).real();
}

double wkb_tail_integrand(cd zeta, double delta, double u) {
    return tail_q(zeta, delta, u);
}

double weyl_R(const AdmissibleProfile& profile, cd zeta, double delta) {
    return weyl_R_evolved(profile, zeta, delta, 0.0);
}

double weyl_R_evolved(const AdmissibleProfile& profile, cd zeta, double delta, double t) {
    Medium m = make_medium(profile, zeta, delta, t);
    return weyl_R_impl(profile, m, zeta, delta);
}

double weyl_density(const AdmissibleProfile& profile, double kappa, double delta) {
    double km_scale = kappa_max(delta, profile.u_max);
    if (kappa < 0.0 || kappa > km_scale * (1.0 + 1e-12))
        throw std::domain_error("weyl_density: kappa outside [0, kappa_max]");
    double floor_k = 1e-4 * km_scale;
    if (kappa < floor_k) {
        // The prefactor vanishes while the integral diverges at the vertex;
        // the product has a finite limit. Extrapolate linearly from nearby.
        double r1 = weyl_density(profile, floor_k, delta);
        double r2 = weyl_density(profile, 2.0 * floor_k, delta);
        double rho0 = 2.0 * r1 - r2;
        return rho0 + (r1 - rho0) * (kappa / floor_k);
    }
    QuadratrixPoint p = quadratrix(kappa, delta);
    Medium m = make_medium(profile, p.zeta, delta, 0.0);
    double dEdk = (level_E_prime(p.zeta, delta) * p.zeta_prime).real();
    auto r_int = [&](double x) { return wkb_band_integrand(p.zeta, delta, m.u(x)); };
    double xm = m.x_minus, xp = m.x_plus;
    if (!(xp > xm)) return 0.0;
    double mid = 0.5 * (xm + xp);
    // r has inverse-square-root endpoint singularities; x = x_pm -+ s^2
    // turns them into bounded integrands.
    double total = 0.0;
    total += quad([&](double s) { return 2.0 * s * r_int(xm + s * s); }, 0.0,
                  std::sqrt(mid - xm));
    total += quad([&](double s) { return 2.0 * s * r_int(xp - s * s); }, 0.0,
                  std::sqrt(xp - mid));
    return 0.5 * dEdk * total;
}

double tail_theta(const AdmissibleProfile& profile, cd zeta, int side, double delta) {
    return tail_theta_evolved(profile, zeta, side, delta, 0.0);
}

double tail_theta_evolved(const AdmissibleProfile& profile, cd zeta, int side,
                          double delta, double t) {
    if (side != 1 && side != -1)
        throw std::domain_error("tail_theta: side must be +1 or -1");
    Medium m = make_medium(profile, zeta, delta, t);
    return tail_theta_impl(m, zeta, delta, side);
}

ScatteringData modified_data(const AdmissibleProfile& profile, int N, double delta) {
    if (N < 1) throw std::domain_error("modified_data: N must be at least 1");
    ScatteringData out;
    out.N = N;
    out.delta = delta;
    double R0 = weyl_R(profile, cd(1.0 / (2.0 * delta), 0.0), delta);
    out.eps = R0 / (pi * N);
    double km = kappa_max(delta, profile.u_max);
    double tol = 1e-11 * R0;
    for (int n = 1; n <= N; ++n) {
        double target = R0 * (n - 0.5) / N;
        double lo = 0.0, hi = km; // R decreasing: R(lo) = R0 > target > 0 = R(hi)
        double kmid = 0.0, rmid = 0.0;
        for (int it = 0; it < 200; ++it) {
            kmid = 0.5 * (lo + hi);
            rmid = weyl_R(profile, quadratrix(kmid, delta).zeta, delta);
            if (std::abs(rmid - target) <= tol) break;
            if (rmid > target) lo = kmid; else hi = kmid;
            if (hi - lo < 1e-15 * km)
                throw std::runtime_error("modified_data: eigenvalue bracket collapsed");
        }
        if (std::abs(rmid - target) > tol)
            throw std::runtime_error("modified_data: eigenvalue solve did not reach tolerance");
        QuadratrixPoint p = quadratrix(kmid, delta);
        out.eigen.push_back(p);
        // Norming constants grow like exp(+2 theta_+ / eps); keep them in the
        // log domain. (The plus sign is what makes the subset expansion of
        // det(I + Delta) reproduce the potential V with its -theta_+ term.)
        out.log_c.push_back(2.0 * tail_theta(profile, p.zeta, +1, delta) / out.eps);
    }
    return out;
}

std::string serialize(const ScatteringData& data) {
    std::ostringstream os;
    char buf[256];
    os << "ilw-scattering v1\n";
    std::snprintf(buf, sizeof buf, "N %d\ndelta %.17g\neps %.17g\n", data.N,
                  data.delta, data.eps);
    os << buf;
    for (int n = 0; n < data.N; ++n) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", data.eigen[n].kappa,
                      data.eigen[n].zeta.real(), data.log_c[n]);
        os << buf;
    }
    return os.str();
}

ScatteringData parse_scattering(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line) || line != "ilw-scattering v1")
        throw std::runtime_error("parse_scattering: unknown format header");
    ScatteringData data;
    std::string key;
    is >> key >> data.N;
    if (key != "N" || data.N < 1) throw std::runtime_error("parse_scattering: bad N");
    is >> key >> data.delta;
    if (key != "delta") throw std::runtime_error("parse_scattering: bad delta");
    is >> key >> data.eps;
    if (key != "eps") throw std::runtime_error("parse_scattering: bad eps");
    for (int n = 0; n < data.N; ++n) {
        double kappa = 0.0, rez = 0.0, logc = 0.0;
        if (!(is >> kappa >> rez >> logc))
            throw std::runtime_error("parse_scattering: truncated record");
        QuadratrixPoint p = quadratrix(kappa, data.delta);
        if (std::abs(p.zeta.real() - rez) > 1e-9 * (1.0 + std::abs(rez)))
            throw std::runtime_error("parse_scattering: eigenvalue not on the curve");
        data.eigen.push_back(p);
        data.log_c.push_back(logc);
    }
    return data;
}

} // namespace ilw
