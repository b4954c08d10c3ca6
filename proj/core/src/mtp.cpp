#include <ilw/mtp.hpp>

#include <ilw/lambertw.hpp>

#include <boost/math/special_functions/fpclassify.hpp>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace ilw {

namespace {

constexpr double kPi = 3.14159265358979323846;
const std::complex<double> kI{0.0, 1.0};

using cd = std::complex<double>;

// First and second derivatives of the tilted phase f(k) - k X_tilde.
cd phase_d1(cd k, double xt) { return k + std::exp(-k - 1.0) - xt; }
cd phase_d2(cd k) { return 1.0 - std::exp(-k - 1.0); }

// The engine works on F(k) = sigma * (f(k) - k X_tilde); sigma = -1 runs the
// mirrored landscape used by the conjugated evaluation.
struct Landscape {
    double xt;
    double sigma;  // +1 normal, -1 mirrored

    cd F(cd k) const { return sigma * model_phase(k, xt); }
    cd Fp(cd k) const { return sigma * phase_d1(k, xt); }
    double terrain(cd k) const { return std::imag(F(k)); }
    // descent flow of Im F: unit vector along -grad(Im F)
    cd flow(cd k) const {
        cd g = -kI * std::conj(Fp(k));
        double n = std::abs(g);
        if (!(n > 1e-250)) throw std::runtime_error("descent trace hit a stationary point");
        return g / n;
    }
};

constexpr int kEast = std::numeric_limits<int>::max();

struct Trace {
    std::vector<cd> pts;  // from the seed downhill to the termination point
    int landing = 0;      // west valley index j (center pi*(2j - 1/2)) or kEast
};

// Follow the descent flow from `seed` until the terrain has dropped `drop*he`
// below `v_ref`. Fourth-order steps, waypoint every few steps.
Trace trace_descent(const Landscape& L, cd seed, double v_ref, double he,
                    double drop) {
    double ds = std::min(0.04, 0.25 * std::sqrt(he));
    double v_stop = v_ref - drop * he;
    int record_every = std::max(1, static_cast<int>(std::floor(0.12 / ds)));
    Trace tr;
    tr.pts.push_back(seed);
    cd k = seed;
    int max_steps = static_cast<int>(std::ceil(40.0 / ds));
    int step = 0;
    for (; step < max_steps; ++step) {
        cd f1 = L.flow(k);
        cd f2 = L.flow(k + 0.5 * ds * f1);
        cd f3 = L.flow(k + 0.5 * ds * f2);
        cd f4 = L.flow(k + ds * f3);
        k += (ds / 6.0) * (f1 + 2.0 * f2 + 2.0 * f3 + f4);
        if (std::abs(k) > 60.0)
            throw std::runtime_error("descent trace escaped the working region");
        if ((step + 1) % record_every == 0) tr.pts.push_back(k);
        if (L.terrain(k) <= v_stop) break;
    }
    if (step == max_steps)
        throw std::runtime_error("descent trace failed to reach its valley");
    if (tr.pts.back() != k) tr.pts.push_back(k);

    cd dir = tr.pts.size() >= 2 ? tr.pts.back() - tr.pts[tr.pts.size() - 2]
                                : L.flow(seed);
    if (dir.real() > 0.05 * std::abs(dir)) {
        tr.landing = kEast;
    } else {
        double t = L.sigma * tr.pts.back().imag();
        tr.landing = static_cast<int>(std::lround((t / kPi + 0.5) / 2.0));
    }
    return tr;
}

void append_reversed(std::vector<cd>& out, const std::vector<cd>& tr) {
    out.insert(out.end(), tr.rbegin(), tr.rend());
}
void append_forward(std::vector<cd>& out, const std::vector<cd>& tr) {
    out.insert(out.end(), tr.begin(), tr.end());
}

// Steepest-descent directions at a simple saddle: Im(F'' e^{2 i theta}) < 0.
double descent_angle(const Landscape& L, cd ks) {
    cd f2 = L.sigma * phase_d2(ks);
    return 0.5 * (-kPi / 2.0 - std::arg(f2));
}

// Near-saddle waypoint offset: small enough that the straight bridge through
// the saddle stays within ~he/2 of its level.
double seed_offset(cd ks, double he, double scale) {
    double f2 = std::abs(phase_d2(ks));
    return scale * 0.7 * std::sqrt(he / std::max(f2, 1e-4));
}

// Both descent flows from a saddle, matched against the expected landings.
// Returns the contour piece from landing `first` through the saddle to
// landing `second`.
std::vector<cd> saddle_pass(const Landscape& L, cd ks, double he, double scale,
                            double drop, int first, int second) {
    double th = descent_angle(L, ks);
    double off = seed_offset(ks, he, scale);
    cd sa = ks + std::polar(off, th);
    cd sb = ks + std::polar(off, th + kPi);
    double v_ref = L.terrain(ks);
    Trace ta = trace_descent(L, sa, v_ref, he, drop);
    Trace tb = trace_descent(L, sb, v_ref, he, drop);
    if (ta.landing == second && tb.landing == first) {
        std::swap(ta, tb);
        std::swap(sa, sb);
    }
    if (ta.landing != first || tb.landing != second)
        throw std::runtime_error("contour trace landed in an unexpected valley");
    std::vector<cd> pts;
    append_reversed(pts, ta.pts);
    pts.push_back(ks);
    append_forward(pts, tb.pts);
    return pts;
}

// Saddles k_n = X_tilde + W_n(-e^{-X_tilde-1}), with a guarded Newton polish.
cd saddle(int n, double xt) {
    cd k = xt + lambert_w(n, -std::exp(-xt - 1.0));
    for (int it = 0; it < 2; ++it) {
        cd g = phase_d1(k, xt);
        cd gp = phase_d2(k);
        if (std::abs(gp) < 0.05) break;  // fold vicinity: already at sqrt accuracy
        k -= g / gp;
    }
    return k;
}

// Regime boundary for the coalescing pair: below it the two saddles are
// treated as one cubic point at -1.
double fold_window(double he) { return 0.15 * std::cbrt(he * he); }

// Assembled contour: one or more polylines combined with signs.
struct Assembly {
    std::vector<std::vector<cd>> paths;
    std::vector<double> signs;
};

Assembly build_contour(double nu, const Landscape& L, double he, double scale,
                       double drop);

// The -infinity contour: west valley at height -pi/2 out to the southeast ray.
std::vector<cd> build_inf_path(const Landscape& L, double he, double scale,
                               double drop) {
    double xt = L.xt;
    double xs = fold_window(he);
    if (std::abs(xt) <= xs) {
        // Coalesced pair: cubic point at -1, descent sectors at -5pi/6 and -pi/6.
        double l0 = 0.9 * std::cbrt(he) * scale;
        cd a = -1.0 + std::polar(l0, L.sigma * (-5.0 * kPi / 6.0));
        cd b = -1.0 + std::polar(l0, L.sigma * (-kPi / 6.0));
        double v_ref = L.terrain(cd(-1.0, 0.0));
        Trace ta = trace_descent(L, a, v_ref, he, drop);
        Trace tb = trace_descent(L, b, v_ref, he, drop);
        if (ta.landing != 0 || tb.landing != kEast)
            throw std::runtime_error("contour trace landed in an unexpected valley");
        std::vector<cd> pts;
        append_reversed(pts, ta.pts);
        append_forward(pts, tb.pts);
        return pts;
    }
    if (xt > xs) {
        // Separated real pair: west flow from k_{-1}, the oscillatory stretch of
        // real axis between the saddles, southeast flow from k_0.
        cd km = saddle(-1, xt), kp = saddle(0, xt);
        if (L.sigma < 0) {
            km = std::conj(km);
            kp = std::conj(kp);
        }
        double gap = std::abs(kp - km);
        double om = std::min(seed_offset(km, he, scale), 0.25 * gap);
        double op = std::min(seed_offset(kp, he, scale), 0.25 * gap);
        cd sw = km + std::polar(om, L.sigma * (-3.0 * kPi / 4.0));
        cd se = kp + std::polar(op, L.sigma * (-kPi / 4.0));
        Trace tw = trace_descent(L, sw, L.terrain(km), he, drop);
        Trace te = trace_descent(L, se, L.terrain(kp), he, drop);
        if (tw.landing != 0 || te.landing != kEast)
            throw std::runtime_error("contour trace landed in an unexpected valley");
        std::vector<cd> pts;
        append_reversed(pts, tw.pts);
        pts.push_back(km);
        pts.push_back(kp);
        append_forward(pts, te.pts);
        return pts;
    }
    // Conjugate pair: only the lower saddle carries the contour.
    cd ks = saddle(-1, xt);
    if (L.sigma < 0) ks = std::conj(ks);
    return saddle_pass(L, ks, he, scale, drop, 0, kEast);
}

// Hairpin from valley pi*nu to pi*(nu+2) around one pass saddle (|m| >= 1);
// for m <= -1 the natural pass connects the lower valley to the southeast
// instead, so the hairpin is that path minus the -infinity contour.
Assembly build_contour(double nu, const Landscape& L, double he, double scale,
                       double drop) {
    Assembly as;
    if (std::isinf(nu)) {
        as.paths.push_back(build_inf_path(L, he, scale, drop));
        as.signs.push_back(1.0);
        return as;
    }
    long q = std::lround(2.0 * nu);
    long m = (q + 1) / 4;
    if (m >= 1) {
        cd ks = saddle(static_cast<int>(m), L.xt);
        if (L.sigma < 0) ks = std::conj(ks);
        as.paths.push_back(saddle_pass(L, ks, he, scale, drop,
                                       static_cast<int>(m), static_cast<int>(m) + 1));
        as.signs.push_back(1.0);
        return as;
    }
    if (m <= -1) {
        // The contour from valley m to valley m+1 is the pass over k_{m-1}
        // (valley m out to the southeast) minus the pass over k_m (valley m+1
        // out to the southeast); for m = -1 the subtracted pass is the
        // -infinity contour itself, which also handles the coalescing pair.
        cd ka = saddle(static_cast<int>(m) - 1, L.xt);
        if (L.sigma < 0) ka = std::conj(ka);
        as.paths.push_back(
            saddle_pass(L, ka, he, scale, drop, static_cast<int>(m), kEast));
        as.signs.push_back(1.0);
        if (m == -1) {
            as.paths.push_back(build_inf_path(L, he, scale, drop));
        } else {
            cd kb = saddle(static_cast<int>(m), L.xt);
            if (L.sigma < 0) kb = std::conj(kb);
            as.paths.push_back(saddle_pass(L, kb, he, scale, drop,
                                           static_cast<int>(m) + 1, kEast));
        }
        as.signs.push_back(-1.0);
        return as;
    }
    // m == 0: nu = -1/2, the hairpin around the coalescing pair into the
    // north channel and out to the west valley at 3pi/2.
    double xt = L.xt;
    double xs = fold_window(he);
    if (std::abs(xt) <= xs) {
        double l0 = 0.9 * std::cbrt(he) * scale;
        cd a = -1.0 + std::polar(l0, L.sigma * (-5.0 * kPi / 6.0));
        cd b = -1.0 + std::polar(l0, L.sigma * (kPi / 2.0));
        double v_ref = L.terrain(cd(-1.0, 0.0));
        Trace ta = trace_descent(L, a, v_ref, he, drop);
        Trace tb = trace_descent(L, b, v_ref, he, drop);
        if (ta.landing != 0 || tb.landing != 1)
            throw std::runtime_error("contour trace landed in an unexpected valley");
        std::vector<cd> pts;
        append_reversed(pts, ta.pts);
        append_forward(pts, tb.pts);
        as.paths.push_back(std::move(pts));
        as.signs.push_back(1.0);
        return as;
    }
    if (xt > xs) {
        // Only the left saddle is crossed: southwest in, north channel out.
        cd km = saddle(-1, xt), kp = saddle(0, xt);
        if (L.sigma < 0) km = std::conj(km);
        if (L.sigma < 0) kp = std::conj(kp);
        double gap = std::abs(kp - km);
        double om = std::min(seed_offset(km, he, scale), 0.25 * gap);
        cd sw = km + std::polar(om, L.sigma * (-3.0 * kPi / 4.0));
        cd ne = km + std::polar(om, L.sigma * (kPi / 4.0));
        Trace tw = trace_descent(L, sw, L.terrain(km), he, drop);
        Trace tn = trace_descent(L, ne, L.terrain(km), he, drop);
        if (tw.landing != 0 || tn.landing != 1)
            throw std::runtime_error("contour trace landed in an unexpected valley");
        std::vector<cd> pts;
        append_reversed(pts, tw.pts);
        pts.push_back(km);
        append_forward(pts, tn.pts);
        as.paths.push_back(std::move(pts));
        as.signs.push_back(1.0);
        return as;
    }
    // Conjugate pair: through the lower saddle to the deep southeast, then
    // back up through the upper saddle and out to the 3pi/2 valley. The two
    // pieces are joined where the integrand is negligible.
    cd klo = saddle(-1, xt), khi = saddle(0, xt);
    if (L.sigma < 0) klo = std::conj(klo);
    if (L.sigma < 0) khi = std::conj(khi);
    std::vector<cd> part1 = saddle_pass(L, klo, he, scale, drop, 0, kEast);
    double th = descent_angle(L, khi);
    double off = seed_offset(khi, he, scale);
    cd sa = khi + std::polar(off, th);
    cd sb = khi + std::polar(off, th + kPi);
    Trace ta = trace_descent(L, sa, L.terrain(khi), he, drop);
    Trace tb = trace_descent(L, sb, L.terrain(khi), he, drop);
    if (ta.landing == 1 && tb.landing == kEast) std::swap(ta, tb);
    if (ta.landing != kEast || tb.landing != 1)
        throw std::runtime_error("contour trace landed in an unexpected valley");
    std::vector<cd> pts = std::move(part1);
    append_reversed(pts, ta.pts);
    pts.push_back(khi);
    append_forward(pts, tb.pts);
    as.paths.push_back(std::move(pts));
    as.signs.push_back(1.0);
    return as;
}

// Exponent of the integrand on the working landscape, scaled by s_ref.
struct Kernel {
    Landscape L;
    double he;
    double y_eff;  // coefficient of the -k term
    double eps;
    int moment;

    cd E(cd k) const { return -(kI / he) * L.F(k) - k * y_eff; }
    cd eval(cd k, double s_ref) const {
        cd w = std::exp(E(k) - s_ref);
        if (moment == 1) w *= kI * k / eps;
        return w;
    }
};

PsiValue integrate_assembly(const Assembly& as, const Kernel& ker) {
    double s_ref = -std::numeric_limits<double>::infinity();
    for (const auto& path : as.paths)
        for (const cd& p : path) s_ref = std::max(s_ref, ker.E(p).real());

    using GK = boost::math::quadrature::gauss_kronrod<double, 15>;
    cd total{0.0, 0.0};
    double err_total = 0.0;
    for (std::size_t ip = 0; ip < as.paths.size(); ++ip) {
        const auto& path = as.paths[ip];
        cd acc{0.0, 0.0};
        double err_acc = 0.0;
        for (std::size_t i = 0; i + 1 < path.size(); ++i) {
            cd a = path[i], d = path[i + 1] - path[i];
            if (std::abs(d) < 1e-15) continue;
            // Budget the oscillation: a few radians of phase per panel.
            double pa = ker.E(a).imag();
            double pm = ker.E(a + 0.5 * d).imag();
            double pb = ker.E(a + d).imag();
            double sweep = std::abs(pm - pa) + std::abs(pb - pm);
            int nsub = std::clamp(static_cast<int>(std::ceil(sweep / 2.0)), 1, 600);
            for (int s = 0; s < nsub; ++s) {
                double t0 = static_cast<double>(s) / nsub;
                double t1 = static_cast<double>(s + 1) / nsub;
                double e = 0.0;
                cd v = GK::integrate(
                    [&](double t) { return ker.eval(a + t * d, s_ref) * d; }, t0, t1,
                    4, 1e-10, &e);
                acc += v;
                err_acc += e;
            }
        }
        total += as.signs[ip] * acc;
        err_total += err_acc;
    }
    PsiValue out;
    out.mantissa = total;
    out.log_scale = s_ref;
    double mag = std::abs(total);
    out.rel_error = mag > 0.0 ? err_total / mag
                              : std::numeric_limits<double>::infinity();
    return out;
}

void check_label(double nu) {
    if (std::isinf(nu) && nu < 0.0) return;
    if (!std::isfinite(nu))
        throw std::domain_error("psi label must be -infinity or in 2Z - 1/2");
    long q = std::lround(2.0 * nu);
    if (std::abs(2.0 * nu - q) > 1e-9 || ((q % 4) + 4) % 4 != 3)
        throw std::domain_error("psi label must be -infinity or in 2Z - 1/2");
}

PsiValue psi_core(double nu, double X, double y_til, double eps, double h,
                  int moment, bool mirror, double scale) {
    check_label(nu);
    if (!(eps > 0.0)) throw std::domain_error("psi: eps must be positive");
    if (!(h > 0.0)) throw std::domain_error("psi: h must be positive");
    if (y_til < -1e-9 || y_til > 1.0 + 1e-9)
        throw std::domain_error("psi: Z must lie in the strip |Im Z| <= eps/2");
    y_til = std::clamp(y_til, 0.0, 1.0);
    double he = h * eps;
    Landscape L{h * X, mirror ? -1.0 : 1.0};
    double drop = std::max(46.0, 2.2 / he);
    Assembly as = build_contour(nu, L, he, scale, drop);
    Kernel ker{L, he, mirror ? 1.0 - y_til : y_til, eps, moment};
    return integrate_assembly(as, ker);
}

}  // namespace

cd model_phase(cd k) { return 0.5 * k * k - std::exp(-k - 1.0); }
cd model_phase(cd k, double X_tilde) { return model_phase(k) - k * X_tilde; }

SaddleSet saddle_points(double X_tilde, const std::vector<int>& branches) {
    if (!std::isfinite(X_tilde))
        throw std::domain_error("saddle_points: X_tilde must be finite");
    SaddleSet out;
    out.X_tilde = X_tilde;
    for (int n : branches) out.points[n] = saddle(n, X_tilde);
    return out;
}

std::complex<double> PsiValue::value() const {
    return mantissa * std::exp(log_scale);
}

ContourSpec contour_spec(double nu, double X_tilde, double eps, double h) {
    check_label(nu);
    if (!std::isfinite(X_tilde))
        throw std::domain_error("contour_spec: X_tilde must be finite");
    if (!(eps > 0.0 && h > 0.0))
        throw std::domain_error("contour_spec: eps and h must be positive");
    double he = h * eps;
    Landscape L{X_tilde, 1.0};
    Assembly as = build_contour(nu, L, he, 1.0, std::max(46.0, 2.2 / he));
    ContourSpec out;
    out.nu = nu;
    out.waypoints = as.paths[0];
    if (as.paths.size() == 2) {
        // The subtracted pass, reversed, continues the polyline back from the
        // far southeast to the destination valley; the junction lies where the
        // integrand is negligible.
        append_reversed(out.waypoints, as.paths[1]);
    }
    const auto& w = out.waypoints;
    out.start_direction = (w.front() - w[1]) / std::abs(w.front() - w[1]);
    out.end_direction =
        (w.back() - w[w.size() - 2]) / std::abs(w.back() - w[w.size() - 2]);
    return out;
}

PsiValue psi_fundamental(double nu, cd Z, double eps, double h) {
    return psi_core(nu, Z.real(), Z.imag() / eps + 0.5, eps, h, 0, false, 1.0);
}

PsiValue psi_x(double nu, cd Z, double eps, double h) {
    return psi_core(nu, Z.real(), Z.imag() / eps + 0.5, eps, h, 1, false, 1.0);
}

PsiValue psi_fundamental_mirrored(double nu, cd Z, double eps, double h) {
    return psi_core(nu, Z.real(), Z.imag() / eps + 0.5, eps, h, 0, true, 1.0);
}

PsiValue psi_fundamental_scaled(double nu, cd Z, double eps, double h,
                                double seed_scale) {
    if (!(seed_scale > 0.2 && seed_scale < 3.0))
        throw std::domain_error("psi: seed_scale out of range");
    return psi_core(nu, Z.real(), Z.imag() / eps + 0.5, eps, h, 0, false,
                    seed_scale);
}

double model_equation_residual(double nu, double X, double eps, double h) {
    PsiValue pp = psi_core(nu, X, 0.0, eps, h, 0, false, 1.0);
    PsiValue pm = psi_core(nu, X, 1.0, eps, h, 0, false, 1.0);
    PsiValue px = psi_core(nu, X, 0.0, eps, h, 1, false, 1.0);
    double s = std::max({pp.log_scale, pm.log_scale, px.log_scale});
    cd a = kI * eps * px.mantissa * std::exp(px.log_scale - s);
    cd b = h * X * pp.mantissa * std::exp(pp.log_scale - s);
    cd c = -std::exp(-1.0) * pm.mantissa * std::exp(pm.log_scale - s);
    double norm = std::max(std::abs(pp.mantissa) * std::exp(pp.log_scale - s),
                           std::abs(pm.mantissa) * std::exp(pm.log_scale - s));
    return std::abs(a + b + c) / norm;
}

std::complex<double> airy_ai(cd z) {
    // Ai(z) = Ai(0) 0F1(;2/3;z^3/9) + Ai'(0) z 0F1(;4/3;z^3/9)
    const double ai0 = 0.35502805388781723926;
    const double aip0 = -0.25881940379280679840;
    cd w = z * z * z / 9.0;
    cd f{1.0, 0.0}, g{1.0, 0.0};
    cd tf{1.0, 0.0}, tg{1.0, 0.0};
    for (int k = 0; k < 80; ++k) {
        tf *= w / ((k + 1.0) * (k + 2.0 / 3.0));
        tg *= w / ((k + 1.0) * (k + 4.0 / 3.0));
        f += tf;
        g += tg;
        if (std::abs(tf) + std::abs(tg) < 1e-18 * (std::abs(f) + std::abs(g))) break;
    }
    return ai0 * f + aip0 * z * g;
}

PsiValue psi_asymptotic(double nu, double chi, double Y_tilde, double eps, double h,
                        double alpha) {
    check_label(nu);
    if (!(alpha > 0.5 && alpha < 2.0 / 3.0))
        throw std::domain_error("psi_asymptotic: alpha must lie in (1/2, 2/3)");
    if (!(eps > 0.0 && h > 0.0))
        throw std::domain_error("psi_asymptotic: eps and h must be positive");
    double he = h * eps;
    double X = std::pow(eps, alpha) * chi;
    PsiValue out;
    out.rel_error = 0.0;
    if (std::isinf(nu) || std::lround(2.0 * nu) == -1) {
        bool half = !std::isinf(nu);
        double pref = 2.0 * kPi * std::cbrt(2.0 * he);
        cd expo = kI / (2.0 * he) - kI * X / eps + Y_tilde;
        cd arg;
        if (!half) {
            arg = -std::cbrt(2.0 * h) * X / std::pow(eps, 2.0 / 3.0);
        } else {
            expo += kI * kPi / 3.0;
            arg = std::cbrt(2.0 * h) * std::polar(1.0, kPi / 3.0) * X /
                  std::pow(eps, 2.0 / 3.0);
        }
        out.log_scale = expo.real();
        out.mantissa = pref * std::exp(expo - out.log_scale) * airy_ai(arg);
        return out;
    }
    long q = std::lround(2.0 * nu);
    long m = (q + 1) / 4;
    int n = m >= 1 ? static_cast<int>((q + 1) / 4) : static_cast<int>((q - 3) / 4);
    cd wn = lambert_w(n, -std::exp(-1.0));
    cd pref = std::sqrt(2.0 * kPi * he / (1.0 + wn));
    double corner = m >= 1 ? 3.0 * kPi / 4.0 : -kPi / 4.0;
    cd expo = kI * (1.0 - (1.0 + wn) * (1.0 + wn)) / (2.0 * he) + kI * wn * X / eps -
              wn * Y_tilde + kI * corner;
    out.log_scale = expo.real();
    out.mantissa = pref * std::exp(expo - out.log_scale);
    return out;
}

AiryCompareResult airy_compare(double nu, const std::vector<double>& chi_grid,
                               double eps, double h, double alpha) {
    AiryCompareResult res;
    res.chi = chi_grid;
    std::vector<PsiValue> num, form;
    num.reserve(chi_grid.size());
    form.reserve(chi_grid.size());
    double s_max = -std::numeric_limits<double>::infinity();
    for (double chi : chi_grid) {
        // Compare on the lower strip edge Z = X - i eps/2 (the psi-plus line of
        // the model equation): there the printed closed form coincides with the
        // exact fold expansion, so the comparison isolates the genuine
        // higher-order error.
        double X = std::pow(eps, alpha) * chi;
        PsiValue p = psi_fundamental(nu, cd(X, -eps / 2.0), eps, h);
        PsiValue q = psi_asymptotic(nu, chi, 0.0, eps, h, alpha);
        s_max = std::max({s_max, q.log_scale, p.log_scale});
        num.push_back(p);
        form.push_back(q);
    }
    res.log_scale = s_max;
    for (std::size_t i = 0; i < chi_grid.size(); ++i) {
        cd pn = num[i].mantissa * std::exp(num[i].log_scale - s_max);
        cd pf = form[i].mantissa * std::exp(form[i].log_scale - s_max);
        res.psi_mantissa.push_back(pn);
        res.formula_mantissa.push_back(pf);
        double rel = std::abs(pn - pf) / std::abs(pf);
        res.rel_error.push_back(rel);
        res.max_rel_error = std::max(res.max_rel_error, rel);
    }
    return res;
}

}  // namespace ilw
