#include "ilw/profile.hpp"

#include "ilw/quadratrix.hpp"

#include <cmath>
// pchip.hpp in this Boost release calls unqualified isnan; make the std
// overloads visible to ordinary lookup before instantiation.
using std::isnan;
#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

namespace ilw {

namespace {

constexpr int kGridPoints = 4096;
constexpr double kGridHalfWidth = 30.0;

double golden_minimize(const std::function<double(double)>& f, double a, double b) {
    const double inv_phi = 0.6180339887498949;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int it = 0; it < 120 && (b - a) > 1e-13 * (1.0 + std::abs(a)); ++it) {
        if (fc < fd) {
            b = d; d = c; fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c; c = d; fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return 0.5 * (a + b);
}

void validate(const AdmissibleProfile& p) {
    if (!(p.u_max > 0.0))
        throw std::domain_error("profile: maximum value must be positive");
    double lo = p.x_max - kGridHalfWidth, hi = p.x_max + kGridHalfWidth;
    double h = (hi - lo) / (kGridPoints - 1);
    for (int i = 0; i < kGridPoints; ++i) {
        double x = lo + i * h;
        double u = p.u0(x);
        if (!(u >= 0.0) || !std::isfinite(u))
            throw std::domain_error("profile: positivity violated at x = " + std::to_string(x));
        if (u > p.u_max * (1.0 + 1e-12))
            throw std::domain_error("profile: value above the declared maximum at x = " +
                                    std::to_string(x));
        // Slope sign checks only carry information where the profile is
        // meaningfully above the underflow tail.
        if (u < 1e-12 * p.u_max || std::abs(x - p.x_max) < 1e-6) continue;
        double du = p.du0(x);
        if (x < p.x_max && !(du > 0.0))
            throw std::domain_error("profile: single-lobe violated (non-increasing left of "
                                    "maximum) at x = " + std::to_string(x));
        if (x > p.x_max && !(du < 0.0))
            throw std::domain_error("profile: single-lobe violated (non-decreasing right of "
                                    "maximum) at x = " + std::to_string(x));
    }
    if (!std::isfinite(p.decay_certificate))
        throw std::domain_error("profile: decay moment is not finite");
}

double decay_moment(const std::function<double(double)>& u0, double a, double b) {
    using boost::math::quadrature::gauss_kronrod;
    auto f = [&](double x) { return (x * x + 1.0) * u0(x); };
    return gauss_kronrod<double, 31>::integrate(f, a, b, 10, 1e-10);
}

double catastrophe_time_impl(const AdmissibleProfile& p) {
    // Steepest descent slope lies right of the maximum. Grid scan to bracket,
    // golden-section refine, then Newton on the slope's derivative via
    // central differences.
    double a = p.x_max, b = p.x_max + kGridHalfWidth;
    int n = 1024;
    double best = a, best_val = 0.0;
    for (int i = 0; i <= n; ++i) {
        double x = a + (b - a) * i / n;
        double v = p.du0(x);
        if (v < best_val) { best_val = v; best = x; }
    }
    double step = (b - a) / n;
    double x0 = golden_minimize(p.du0, std::max(a, best - 2.0 * step), best + 2.0 * step);
    double h = 1e-5;
    for (int it = 0; it < 8; ++it) {
        double g = (p.du0(x0 + h) - p.du0(x0 - h)) / (2.0 * h);
        double gp = (p.du0(x0 + h) - 2.0 * p.du0(x0) + p.du0(x0 - h)) / (h * h);
        if (!(std::abs(gp) > 0.0)) break;
        double xn = x0 - g / gp;
        if (!(xn > a) || !(xn < b) || !std::isfinite(xn)) break;
        if (std::abs(xn - x0) < 1e-14 * (1.0 + std::abs(x0))) { x0 = xn; break; }
        x0 = xn;
    }
    double steepest = -p.du0(x0);
    if (!(steepest > 0.0))
        throw std::domain_error("catastrophe_time: no negative slope right of the maximum");
    return 1.0 / (2.0 * steepest);
}

} // namespace

AdmissibleProfile build_profile(const ProfileSpec& spec) {
    AdmissibleProfile p;
    if (spec.kind == "sech2") {
        double a = spec.amplitude, c = spec.center, w = spec.width;
        if (!(a > 0.0) || !(w > 0.0))
            throw std::domain_error("profile: sech2 needs positive amplitude and width");
        p.u0 = [a, c, w](double x) {
            double s = 1.0 / std::cosh((x - c) / w);
            return a * s * s;
        };
        p.du0 = [a, c, w](double x) {
            double t = (x - c) / w;
            double s = 1.0 / std::cosh(t);
            return -2.0 * a / w * s * s * std::tanh(t);
        };
        p.x_max = c;
        p.u_max = a;
    } else if (spec.kind == "gauss") {
        double a = spec.amplitude, c = spec.center, w = spec.width;
        if (!(a > 0.0) || !(w > 0.0))
            throw std::domain_error("profile: gauss needs positive amplitude and width");
        p.u0 = [a, c, w](double x) {
            double s = (x - c) / w;
            return a * std::exp(-s * s);
        };
        p.du0 = [a, c, w](double x) {
            double s = (x - c) / w;
            return -2.0 * s / w * a * std::exp(-s * s);
        };
        p.x_max = c;
        p.u_max = a;
    } else if (spec.kind == "tabulated") {
        if (spec.xs.size() != spec.us.size() || spec.xs.size() < 4)
            throw std::domain_error("profile: tabulated needs matching arrays of at least 4 samples");
        auto it = std::max_element(spec.us.begin(), spec.us.end());
        size_t imax = size_t(it - spec.us.begin());
        if (imax == 0 || imax + 1 == spec.us.size())
            throw std::domain_error("profile: tabulated maximum must be interior");
        auto xs = spec.xs, us = spec.us;
        auto interp = std::make_shared<boost::math::interpolators::pchip<std::vector<double>>>(
            std::move(xs), std::move(us));
        double lo = spec.xs.front(), hi = spec.xs.back();
        p.u0 = [interp, lo, hi](double x) {
            if (x < lo || x > hi) return 0.0;
            return (*interp)(x);
        };
        p.du0 = [interp, lo, hi](double x) {
            if (x < lo || x > hi) return 0.0;
            return interp->prime(x);
        };
        // The knot with the largest sample need not be the interpolant's
        // maximum; polish within the neighboring cells.
        double xm = golden_minimize([&](double x) { return -p.u0(x); },
                                    spec.xs[imax - 1], spec.xs[imax + 1]);
        p.x_max = xm;
        p.u_max = p.u0(xm);
    } else {
        throw std::domain_error("profile: unknown kind '" + spec.kind + "'");
    }

    double qlo = p.x_max - 2.0 * kGridHalfWidth, qhi = p.x_max + 2.0 * kGridHalfWidth;
    if (spec.kind == "tabulated") {
        qlo = spec.xs.front();
        qhi = spec.xs.back();
    }
    p.decay_certificate = decay_moment(p.u0, qlo, qhi);
    validate(p);
    p.t_c = catastrophe_time_impl(p);
    return p;
}

TurningPoints turning_points_level(const AdmissibleProfile& profile, double E) {
    if (!(E > 0.0) || E > profile.u_max * (1.0 + 1e-9))
        throw std::domain_error("turning_points: level must lie in (0, u_max]");
    TurningPoints tp;
    if (std::abs(E - profile.u_max) <= 1e-12 * (1.0 + profile.u_max)) {
        tp.x_minus = tp.x_plus = profile.x_max;
        return tp;
    }
    auto solve_side = [&](double outer, double inner) {
        // u0 - E changes sign between outer (below) and inner (above).
        double a = outer, b = inner;
        if (profile.u0(a) - E > 0.0) return std::numeric_limits<double>::quiet_NaN();
        for (int it = 0; it < 200; ++it) {
            double m = 0.5 * (a + b);
            if (profile.u0(m) - E > 0.0) b = m; else a = m;
            if (std::abs(b - a) < 1e-15 * (1.0 + std::abs(a))) break;
        }
        double x = 0.5 * (a + b);
        for (int it = 0; it < 4; ++it) {
            double d = profile.du0(x);
            if (std::abs(d) < 1e-14) break;
            x -= (profile.u0(x) - E) / d;
        }
        return x;
    };
    double lo = profile.x_max - kGridHalfWidth, hi = profile.x_max + kGridHalfWidth;
    double xm = solve_side(lo, profile.x_max);
    double xp = solve_side(hi, profile.x_max);
    if (std::isnan(xm)) { tp.x_minus = lo; tp.clamped = true; } else tp.x_minus = xm;
    if (std::isnan(xp)) { tp.x_plus = hi; tp.clamped = true; } else tp.x_plus = xp;
    return tp;
}

TurningPoints turning_points(const AdmissibleProfile& profile,
                             std::complex<double> zeta, double delta) {
    LevelE e = level_E(zeta, delta);
    return turning_points_level(profile, e.value);
}

double catastrophe_time(const AdmissibleProfile& profile) {
    if (!std::isnan(profile.t_c)) return profile.t_c;
    return catastrophe_time_impl(profile);
}

namespace {

// Characteristic foot point: solves y + 2 u0(y) t = x by bisection with a
// Newton polish; the map is strictly increasing in y for t < t_c.
double burgers_root(const AdmissibleProfile& p, double x, double t) {
    double a = x - 2.0 * p.u_max * t, b = x;
    auto phi = [&](double y) { return y + 2.0 * p.u0(y) * t - x; };
    double fa = phi(a);
    if (fa > 0.0)
        throw std::runtime_error("burgers_eval: characteristic bracket failed");
    for (int it = 0; it < 200; ++it) {
        double m = 0.5 * (a + b);
        if (phi(m) > 0.0) b = m; else a = m;
        if (b - a < 1e-15 * (1.0 + std::abs(x))) break;
    }
    double y = 0.5 * (a + b);
    for (int it = 0; it < 4; ++it) {
        double d = 1.0 + 2.0 * p.du0(y) * t;
        if (!(d > 1e-10)) break;
        y -= phi(y) / d;
    }
    if (std::abs(phi(y)) > 1e-12 * (1.0 + std::abs(x)))
        throw std::runtime_error("burgers_eval: characteristic residual too large");
    return y;
}

void check_time(const AdmissibleProfile& p, double t) {
    if (t < 0.0) throw std::domain_error("burgers_eval: negative time");
    if (t > 0.0 && t >= catastrophe_time(p))
        throw std::domain_error("burgers_eval: time at or beyond the gradient catastrophe");
}

} // namespace

double burgers_eval(const AdmissibleProfile& profile, double x, double t) {
    check_time(profile, t);
    if (t == 0.0) return profile.u0(x);
    return profile.u0(burgers_root(profile, x, t));
}

double burgers_slope(const AdmissibleProfile& profile, double x, double t) {
    check_time(profile, t);
    if (t == 0.0) return profile.du0(x);
    double y = burgers_root(profile, x, t);
    double d = profile.du0(y);
    return d / (1.0 + 2.0 * d * t);
}

} // namespace ilw
