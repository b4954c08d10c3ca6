#include "ilw/equilibrium.hpp"

#include "ilw/lambertw.hpp"
#include "ilw/quadratrix.hpp"
#include "ilw/scattering.hpp"

// fpclassify must precede pchip: the interpolator uses unqualified isnan
#include <boost/math/special_functions/fpclassify.hpp>

#include <boost/math/interpolators/pchip.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

namespace ilw {
namespace {

constexpr double kPi = 3.14159265358979323846;

template <class F>
double quad(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
        std::forward<F>(f), a, b, 12, 1e-10);
}

// Wider rule for the log-kernel potential: the integrand is continuous but
// has a log-divergent derivative at the subtracted point, which adaptive
// bisection resolves a few digits past the target tolerance.
template <class F>
double quad_log(F&& f, double a, double b) {
    if (!(b > a)) return 0.0;
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        std::forward<F>(f), a, b, 15, 1e-10);
}

double burgers_u(const AdmissibleProfile& profile, double x, double t) {
    return t == 0.0 ? profile.u0(x) : burgers_eval(profile, x, t);
}

void check_time(const AdmissibleProfile& profile, double t) {
    if (!(t >= 0.0)) throw std::domain_error("time must be nonnegative");
    double tc = std::isnan(profile.t_c) ? catastrophe_time(profile) : profile.t_c;
    if (t >= tc) throw std::domain_error("time at or beyond the catastrophe");
}

void check_density(const SampledDensity& rho) {
    if (rho.kappa_nodes.size() != rho.values.size() ||
        rho.kappa_nodes.size() != rho.weights.size())
        throw std::domain_error("sampled density: array sizes differ");
    if (rho.kappa_nodes.size() < 4)
        throw std::domain_error("sampled density: too few nodes");
    if (!(rho.delta > 0.0))
        throw std::domain_error("sampled density: delta must be positive");
}

// Clenshaw-Curtis nodes and weights on [0, 1], m >= 2 points.
void cc_rule(int m, std::vector<double>& v, std::vector<double>& w) {
    const int order = m - 1;
    v.resize(m);
    w.assign(m, 0.0);
    for (int j = 0; j <= order; ++j)
        v[j] = 0.5 * (1.0 - std::cos(kPi * j / order));
    for (int j = 0; j <= order; ++j) {
        double gj = (j == 0 || j == order) ? 0.5 : 1.0;
        double s = 0.0;
        for (int k = 0; k <= order; k += 2) {
            double gk = (k == 0 || k == order) ? 0.5 : 1.0;
            s += gk * (2.0 / (1.0 - double(k) * k)) * std::cos(k * kPi * j / order);
        }
        w[j] = gj * s / order; // includes the 1/2 from mapping [-1,1] -> [0,1]
    }
}

// Quadrature panel [a, b] under the cubic map kappa = a + (b-a) v^2 (3-2v).
// The map's derivative vanishes linearly at both ends, so half-integer
// endpoint powers of the integrand (the generic band-edge behavior) become
// analytic in v and the Clenshaw-Curtis rule converges spectrally.
void panel_grid(double a, double b, int m, std::vector<double>& nodes,
                std::vector<double>& weights) {
    if (m < 4) throw std::domain_error("panel_grid: need at least 4 nodes");
    std::vector<double> v, w;
    cc_rule(m, v, w);
    nodes.resize(m);
    weights.resize(m);
    for (int j = 0; j < m; ++j) {
        double s = v[j] * v[j] * (3.0 - 2.0 * v[j]);
        nodes[j] = a + (b - a) * s;
        weights[j] = w[j] * (b - a) * 6.0 * v[j] * (1.0 - v[j]);
    }
    nodes.front() = a;
    nodes.back() = b;
}

// Panels are delimited by exactly repeated nodes.
std::vector<std::pair<int, int>> panel_ranges(const std::vector<double>& nodes) {
    std::vector<std::pair<int, int>> ranges;
    int start = 0;
    for (int i = 0; i + 1 < static_cast<int>(nodes.size()); ++i) {
        if (nodes[i + 1] == nodes[i]) {
            ranges.push_back({start, i});
            start = i + 1;
        }
    }
    ranges.push_back({start, static_cast<int>(nodes.size()) - 1});
    return ranges;
}

// Panel-local monotone cubic interpolation of a sampled density. Building
// this once and reusing it amortizes the setup over many potential
// evaluations at the same density.
class DensityInterp {
public:
    using interp_t = boost::math::interpolators::pchip<std::vector<double>>;

    explicit DensityInterp(const SampledDensity& rho) {
        check_density(rho);
        for (auto [a, b] : panel_ranges(rho.kappa_nodes)) {
            if (b - a + 1 < 4)
                throw std::domain_error("sampled density: panel shorter than 4 nodes");
            std::vector<double> xs(rho.kappa_nodes.begin() + a,
                                   rho.kappa_nodes.begin() + b + 1);
            std::vector<double> ys(rho.values.begin() + a, rho.values.begin() + b + 1);
            lo_.push_back(xs.front());
            hi_.push_back(xs.back());
            interp_.emplace_back(std::move(xs), std::move(ys));
        }
    }

    // Zero outside the sampled support.
    double operator()(double kappa) const {
        if (kappa < lo_.front() || kappa > hi_.back()) return 0.0;
        for (std::size_t p = 0; p < interp_.size(); ++p)
            if (kappa <= hi_[p]) return interp_[p](std::max(kappa, lo_[p]));
        return 0.0;
    }

    double lo() const { return lo_.front(); }
    double hi() const { return hi_.back(); }
    const std::vector<double>& panel_lo() const { return lo_; }
    const std::vector<double>& panel_hi() const { return hi_; }

private:
    std::vector<interp_t> interp_;
    std::vector<double> lo_, hi_;
};

// External potential V(zeta; x, t) = x Im zeta + t Im[(zeta - 1/2delta)^2]
// - theta_+(zeta), the linear-in-rho part of the energy density.
double external_potential(const AdmissibleProfile& profile,
                          std::complex<double> zeta, double x, double t,
                          double delta) {
    double kappa = zeta.imag();
    if (kappa <= 1e-14) return 0.0;
    std::complex<double> c = zeta - 0.5 / delta;
    return x * kappa + t * (c * c).imag() - tail_theta(profile, zeta, +1, delta);
}

double potential_L_impl(const DensityInterp& f, double delta,
                        std::complex<double> lambda) {
    if (std::abs(lambda.imag()) < 1e-14) return 0.0; // kernel odd across the axis
    if (lambda.imag() < 0.0)
        return -potential_L_impl(f, delta, std::conj(lambda));

    // Subtract the log singularity when lambda sits on the spectral curve.
    double kbar = lambda.imag();
    bool on_curve = false;
    double rho_hat = 0.0;
    double log_speed = 0.0; // log |zeta'(kbar)|
    if (kbar <= f.hi()) {
        QuadratrixPoint qb = quadratrix(kbar, delta);
        on_curve = std::abs(lambda - qb.zeta) <= 1e-8 * (1.0 + std::abs(lambda));
        if (on_curve) {
            rho_hat = f(kbar);
            log_speed = std::log(std::abs(qb.zeta_prime));
        }
    }

    // `dist` is the signed distance eta - kbar supplied exactly by the caller:
    // next to the singular point the end substitution knows it as +-s^2 even
    // where fl(kbar + s^2) collapses onto kbar, and the factored form
    // log|lambda - ze| = log|dist| + log|zeta'(kbar)| + O(dist) keeps the
    // subtracted kernel finite all the way into the node.
    auto kern = [&](double eta, double dist) {
        std::complex<double> ze = quadratrix(eta, delta).zeta;
        double logA = std::log(std::abs(lambda - std::conj(ze)));
        double fe = f(eta);
        if (!on_curve) return fe * (logA - std::log(std::abs(lambda - ze))) / kPi;
        double ad = std::abs(dist);
        if (ad < 1e-7 * (1.0 + kbar)) {
            double val = fe * (logA - log_speed);
            if (ad > 0.0) val -= (fe - rho_hat) * std::log(ad);
            return val / kPi;
        }
        return (fe * (logA - std::log(std::abs(lambda - ze))) +
                rho_hat * std::log(ad)) /
               kPi;
    };
    // Integrate [c, d] with eta = c + s^2 / d - s^2 end substitutions: they
    // flatten the square-root vanishing of the density at band edges and
    // turn the subtracted log remainder next to kbar into s^3 log s.
    auto piece = [&](double c, double d) {
        if (!(d > c)) return 0.0;
        double m = 0.5 * (c + d);
        bool lo_anchor = on_curve && c == kbar;
        bool hi_anchor = on_curve && d == kbar;
        double lo_off = c - kbar, hi_off = d - kbar;
        return quad_log(
                   [&](double s) {
                       double ss = s * s;
                       return 2.0 * s * kern(c + ss, lo_anchor ? ss : lo_off + ss);
                   },
                   0.0, std::sqrt(m - c)) +
               quad_log(
                   [&](double s) {
                       double ss = s * s;
                       return 2.0 * s * kern(d - ss, hi_anchor ? -ss : hi_off - ss);
                   },
                   0.0, std::sqrt(d - m));
    };

    double total = 0.0;
    for (std::size_t p = 0; p < f.panel_lo().size(); ++p) {
        double a = f.panel_lo()[p], b = f.panel_hi()[p];
        if (on_curve && kbar > a && kbar < b)
            total += piece(a, kbar) + piece(kbar, b);
        else
            total += piece(a, b);
    }
    if (on_curve) {
        // closed form of Integral_lo^hi log|eta - kbar| deta
        double left = kbar - f.lo(), right = f.hi() - kbar;
        double reg = 0.0;
        if (left > 0.0) reg += left * (std::log(left) - 1.0);
        if (right > 0.0) reg += right * (std::log(right) - 1.0);
        total -= rho_hat * reg / kPi;
    }
    return total;
}

double min_density_impl(const AdmissibleProfile& profile, double kappa, double x,
                        double t, double delta) {
    QuadratrixPoint p = quadratrix(kappa, delta);
    double level = level_E(p.zeta, delta).value;
    TurningPoints tp = turning_points_level(profile, level);
    double xm = tp.x_minus + 2.0 * level * t;
    double xp = tp.x_plus + 2.0 * level * t;
    // near the top level the window degenerates and the root solve may
    // return crossed endpoints
    if (x >= xp || !(xp - xm > 0.0)) return 0.0;

    auto rint = [&](double xx) {
        return wkb_band_integrand(p.zeta, delta, burgers_u(profile, xx, t));
    };
    double a = std::max(x, xm);
    double mid = std::max(0.5 * (xm + xp), a);
    // inverse-square-root endpoints are flattened by the s^2 substitution;
    // the lower endpoint is singular only when the window is untruncated
    auto top = [&](double s) { return 2.0 * s * rint(xp - s * s); };
    double integral = quad(top, 0.0, std::sqrt(xp - mid));
    if (a <= xm) {
        auto bottom = [&](double s) { return 2.0 * s * rint(xm + s * s); };
        integral += quad(bottom, 0.0, std::sqrt(mid - xm));
    } else {
        integral += quad(rint, a, mid);
    }
    double pref = 0.5 * (level_E_prime(p.zeta, delta) * p.zeta_prime).real();
    return std::max(0.0, pref * integral);
}

} // namespace

SampledDensity sample_weyl_density(const AdmissibleProfile& profile, double delta,
                                   int n) {
    if (n < 8) throw std::domain_error("sample_weyl_density: need at least 8 nodes");
    double km = kappa_max(delta, profile.u_max);
    SampledDensity rho;
    rho.delta = delta;
    panel_grid(0.0, km, n, rho.kappa_nodes, rho.weights);
    rho.values.resize(n);
    for (int i = 0; i < n; ++i)
        rho.values[i] = weyl_density(profile, rho.kappa_nodes[i], delta);
    return rho;
}

SampledDensity sample_min_density(const AdmissibleProfile& profile, double x,
                                  double t, double delta, int n) {
    if (n < 8) throw std::domain_error("sample_min_density: need at least 8 nodes");
    check_time(profile, t);
    double km = kappa_max(delta, profile.u_max);
    double edge = band_edge_kappa(profile, x, t, delta);

    SampledDensity rho;
    rho.delta = delta;
    if (n < 16 || edge <= 1e-3 * km || edge >= km * (1.0 - 1e-12)) {
        // Degenerate band (or no room to split): a single panel. When the
        // edge is interior but tiny the kink sits where the density itself
        // is negligible.
        panel_grid(0.0, km, n, rho.kappa_nodes, rho.weights);
    } else {
        // Split at the band edge so the kink of the minimizer coincides with
        // a panel boundary; the repeated node marks the break.
        int m1 = n / 2, m2 = n - m1;
        std::vector<double> nodes2, weights2;
        panel_grid(0.0, edge, m1, rho.kappa_nodes, rho.weights);
        panel_grid(edge, km, m2, nodes2, weights2);
        rho.kappa_nodes.insert(rho.kappa_nodes.end(), nodes2.begin(), nodes2.end());
        rho.weights.insert(rho.weights.end(), weights2.begin(), weights2.end());
    }
    rho.values.resize(rho.kappa_nodes.size());
    for (std::size_t i = 0; i < rho.kappa_nodes.size(); ++i) {
        if (i > 0 && rho.kappa_nodes[i] == rho.kappa_nodes[i - 1]) {
            rho.values[i] = rho.values[i - 1];
            continue;
        }
        rho.values[i] = min_density(profile, rho.kappa_nodes[i], x, t, delta);
    }
    return rho;
}

double density_at(const SampledDensity& rho, double kappa) {
    return DensityInterp(rho)(kappa);
}

double potential_L(const SampledDensity& rho, std::complex<double> lambda) {
    DensityInterp f(rho);
    return potential_L_impl(f, rho.delta, lambda);
}

double functional_E(const SampledDensity& rho, double x, double t,
                    const AdmissibleProfile& profile) {
    DensityInterp f(rho);
    double total = 0.0;
    for (std::size_t i = 0; i < rho.kappa_nodes.size(); ++i) {
        double w = rho.weights[i], val = rho.values[i];
        if (w == 0.0 || val == 0.0) continue;
        std::complex<double> zeta = quadratrix(rho.kappa_nodes[i], rho.delta).zeta;
        double v = external_potential(profile, zeta, x, t, rho.delta);
        total += w * val * (v + 0.5 * potential_L_impl(f, rho.delta, zeta));
    }
    return total;
}

double functional_P(const SampledDensity& rho) {
    check_density(rho);
    double total = 0.0;
    for (std::size_t i = 0; i < rho.kappa_nodes.size(); ++i)
        total += rho.weights[i] * rho.kappa_nodes[i] * rho.values[i];
    return total;
}

double functional_Q(const SampledDensity& rho) {
    check_density(rho);
    double total = 0.0;
    for (std::size_t i = 0; i < rho.kappa_nodes.size(); ++i) {
        double w = rho.weights[i], val = rho.values[i];
        if (w == 0.0 || val == 0.0) continue;
        std::complex<double> c =
            quadratrix(rho.kappa_nodes[i], rho.delta).zeta - 0.5 / rho.delta;
        total += w * (c * c).imag() * val;
    }
    return total;
}

double min_density(const AdmissibleProfile& profile, double kappa, double x,
                   double t, double delta) {
    check_time(profile, t);
    double km = kappa_max(delta, profile.u_max);
    if (kappa < 0.0 || kappa > km * (1.0 + 1e-12))
        throw std::domain_error("min_density: kappa outside [0, kappa_max]");
    kappa = std::min(kappa, km);
    double floor_k = 1e-4 * km;
    if (kappa < floor_k) {
        // Both the prefactor and the window degenerate at the curve vertex;
        // extrapolate linearly from two safely computable levels.
        double r1 = min_density_impl(profile, floor_k, x, t, delta);
        double r2 = min_density_impl(profile, 2.0 * floor_k, x, t, delta);
        return std::max(0.0, r1 + (r1 - r2) * (floor_k - kappa) / floor_k);
    }
    return min_density_impl(profile, kappa, x, t, delta);
}

double min_potential(const AdmissibleProfile& profile, std::complex<double> zeta,
                     double x, double t, double delta) {
    check_time(profile, t);
    double kappa = zeta.imag();
    if (kappa < -1e-12)
        throw std::domain_error("min_potential: zeta below the curve");
    if (kappa <= 1e-14) return 0.0;
    LevelE lv = level_E(zeta, delta);
    if (!lv.on_curve)
        throw std::domain_error("min_potential: zeta not on the spectral curve");
    if (lv.value <= 0.0) return 0.0; // level at the vertex noise floor
    TurningPoints tp = turning_points_level(profile, lv.value);
    double xm = tp.x_minus + 2.0 * lv.value * t;
    double xp = tp.x_plus + 2.0 * lv.value * t;
    if (xp < xm) xm = xp = 0.5 * (xm + xp); // degenerate window at the top level

    auto qint = [&](double xx) {
        return wkb_tail_integrand(zeta, delta, burgers_u(profile, xx, t));
    };
    // Decaying tail from a >= x_+: one unit with the square-root kink
    // flattened, then the remainder mapped to [0, 1).
    auto tail = [&](double a) {
        auto near = [&](double s) { return 2.0 * s * qint(a + s * s); };
        auto far = [&](double s) {
            double d = 1.0 - s;
            return qint(a + 1.0 + s / d) / (d * d);
        };
        return quad(near, 0.0, 1.0) + quad(far, 0.0, 1.0);
    };

    if (x >= xp) return tail(x);
    if (x >= xm) return kappa * (xp - x) + tail(xp);
    auto left = [&](double s) { return 2.0 * s * qint(xm - s * s); };
    return quad(left, 0.0, std::sqrt(xm - x)) + kappa * (xp - xm) + tail(xp);
}

double frechet(const AdmissibleProfile& profile, const SampledDensity& rho,
               std::complex<double> zeta, double x, double t) {
    DensityInterp f(rho);
    return external_potential(profile, zeta, x, t, rho.delta) +
           potential_L_impl(f, rho.delta, zeta);
}

std::complex<double> band_edge_beta(double delta, double u) {
    if (!(delta > 0.0)) throw std::domain_error("delta must be positive");
    if (!(u >= 0.0)) throw std::domain_error("band_edge_beta: negative level");
    if (u == 0.0) return {0.5 / delta, 0.0};
    return -lambert_w(-1, -std::exp(2.0 * delta * u - 1.0)) / (2.0 * delta);
}

double band_edge_kappa(const AdmissibleProfile& profile, double x, double t,
                       double delta) {
    check_time(profile, t);
    double km = kappa_max(delta, profile.u_max);
    double ustar = burgers_u(profile, x, t);
    if (ustar <= 0.0) return 0.0;
    if (ustar >= profile.u_max) return km;
    // E(zeta(kappa)) grows monotonically from 0 to u_max along the curve.
    double lo = 0.0, hi = km;
    for (int it = 0; it < 90 && hi - lo > 1e-16 * km; ++it) {
        double mid = 0.5 * (lo + hi);
        double lvl = level_E(quadratrix(mid, delta).zeta, delta).value;
        (lvl >= ustar ? hi : lo) = mid;
    }
    return 0.5 * (lo + hi);
}

VariationalReport verify_variational(const AdmissibleProfile& profile, double x,
                                     double t, double delta, int n) {
    check_time(profile, t);
    double km = kappa_max(delta, profile.u_max);
    double ustar = burgers_u(profile, x, t);

    VariationalReport rep;
    rep.tol = 1e-6 * (1.0 + std::abs(x) + t);
    rep.kappa_edge_geometric = band_edge_kappa(profile, x, t, delta);
    rep.structure.y = 2.0 * delta * ustar;
    rep.structure.beta = band_edge_beta(delta, ustar);
    rep.edge_window = 0.01 * km;
    rep.void_margin = std::numeric_limits<double>::infinity();
    rep.sat_margin = -std::numeric_limits<double>::infinity();

    SampledDensity rho = sample_min_density(profile, x, t, delta, n);
    DensityInterp f(rho);

    // The constraint rho <= rho^Wyl binds left of the advected profile peak,
    // the vacuum constraint rho >= 0 right of it; they never bind together.
    bool void_side = x >= profile.x_max + 2.0 * profile.u_max * t;
    double edge = rep.kappa_edge_geometric;

    bool match = true;
    for (std::size_t i = 0; i < rho.kappa_nodes.size(); ++i) {
        double k = rho.kappa_nodes[i];
        if (i > 0 && k == rho.kappa_nodes[i - 1]) continue;
        std::complex<double> zeta = quadratrix(k, delta).zeta;
        double fr = external_potential(profile, zeta, x, t, delta) +
                    potential_L_impl(f, delta, zeta);
        Phase cls = std::abs(fr) <= rep.tol ? Phase::Band
                    : (fr > 0.0 ? Phase::Void : Phase::Saturation);
        rep.structure.kappa.push_back(k);
        rep.structure.phase.push_back(cls);

        if (std::abs(k - edge) <= rep.edge_window) continue;
        Phase pred = k < edge ? Phase::Band
                     : (void_side ? Phase::Void : Phase::Saturation);
        if (pred == Phase::Band)
            rep.band_residual = std::max(rep.band_residual, std::abs(fr));
        else if (pred == Phase::Void)
            rep.void_margin = std::min(rep.void_margin, fr);
        else
            rep.sat_margin = std::max(rep.sat_margin, fr);
        if (cls != pred) match = false;
    }
    double edge_err = std::abs(rep.kappa_edge_geometric - rep.structure.beta.imag());
    rep.ok = match && edge_err <= 1e-6 * std::max(1.0, km);
    return rep;
}

double distributional_limit(const AdmissibleProfile& profile, double x, double t) {
    check_time(profile, t);
    return burgers_u(profile, x, t);
}

double minimizer_energy(const AdmissibleProfile& profile, double x, double t,
                        double delta, int n) {
    SampledDensity rho = sample_min_density(profile, x, t, delta, n);
    return functional_E(rho, x, t, profile);
}

} // namespace ilw
