#include "ilw/ensemble.hpp"

#include "ilw/bigfloat.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <set>
#include <stdexcept>
#include <vector>

namespace ilw {

namespace {

constexpr double pi = 3.14159265358979323846;

struct DataView {
    int N;
    double eps, delta;
    std::vector<double> kappa, q, theta, logc;
    std::vector<std::complex<double>> zeta;
    double kappa_star; // largest kappa in the data

    explicit DataView(const ScatteringData& d)
        : N(d.N), eps(d.eps), delta(d.delta), kappa_star(0.0) {
        kappa.reserve(N); q.reserve(N); theta.reserve(N); zeta.reserve(N);
        for (int n = 0; n < N; ++n) {
            std::complex<double> zn = d.eigen[n].zeta;
            zeta.push_back(zn);
            kappa.push_back(zn.imag());
            std::complex<double> s = zn - 1.0 / (2.0 * delta);
            q.push_back(std::imag(s * s));
            logc.push_back(d.log_c[n]);
            theta.push_back(0.5 * eps * d.log_c[n]);
            kappa_star = std::max(kappa_star, zn.imag());
        }
    }
};

void check_strip(const DataView& v, std::complex<double> z) {
    if (std::abs(z.imag()) > v.delta * v.eps * (1.0 + 1e-9))
        throw std::domain_error("ensemble: z outside the strip |Im z| <= delta*eps");
}

double wrap_pi(double a) { return std::remainder(a, 2.0 * pi); }

// Pairwise log kernel with the diagonal regulated to log(2 kappa).
std::vector<double> pair_kernel(const DataView& v) {
    std::vector<double> g(static_cast<size_t>(v.N) * v.N);
    for (int n = 0; n < v.N; ++n) {
        for (int l = 0; l < v.N; ++l) {
            if (n == l) {
                g[n * v.N + l] = std::log(2.0 * v.kappa[n]);
            } else {
                g[n * v.N + l] = std::log(std::abs(v.zeta[l] - std::conj(v.zeta[n]))) -
                                 std::log(std::abs(v.zeta[l] - v.zeta[n]));
            }
        }
    }
    return g;
}

// I + Delta assembled in software floats under the current precision scope.
std::vector<bigc> assemble(const DataView& v, double x, double y, double t) {
    const int n = v.N;
    big eps_b(v.eps);
    std::vector<bigc> D(n);
    for (int k = 0; k < n; ++k) {
        big re = big(v.logc[k]) / 2 - big(v.kappa[k]) * big(x) / eps_b -
                 big(v.q[k]) * big(t) / eps_b;
        big im = -big(v.kappa[k]) * big(y) / eps_b;
        D[k] = cexp({re, im});
    }
    std::vector<bigc> m(static_cast<size_t>(n) * n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) {
            // C_{rc} = i / (zeta_c - conj zeta_r)
            big wr = big(v.zeta[c].real()) - big(v.zeta[r].real());
            big wi = big(v.zeta[c].imag()) + big(v.zeta[r].imag());
            big d2 = wr * wr + wi * wi;
            bigc cauchy(wi / d2, wr / d2);
            bigc e = cmul(cmul(D[r], cauchy), D[c]);
            if (r == c) e.re += 1;
            m[r * n + c] = e;
        }
    }
    return m;
}

DetAccum lu_at(const DataView& v, double x, double y, double t, int bits) {
    std::vector<bigc> m = assemble(v, x, y, t);
    DetAccum acc = logdet_dense(m, v.N);
    if (acc.pivot_floor < -(bits - 64) * M_LN2)
        throw std::runtime_error(
            "log_det_Z: insufficient precision (pivot cancellation exceeds mantissa budget)");
    return acc;
}

int homotopy_steps(const DataView& v, double y) {
    double bound = 2.0 * v.N * v.kappa_star * std::abs(y) / v.eps;
    return static_cast<int>(std::ceil(4.0 * bound / pi)) + 2;
}

// Continuous argument at (x, y): principal-argument LUs along the segment
// from the real axis, unwrapped step to step. The argument bound confines
// each step's change below pi/4, so nearest-branch unwrapping is exact.
struct ArgTrack {
    double arg;
    DetAccum last;
};
ArgTrack track_arg(const DataView& v, double x, double y, double t, int bits) {
    DetAccum a0 = lu_at(v, x, 0.0, t, bits);
    if (y == 0.0) return {0.0, a0};
    int K = homotopy_steps(v, y);
    double cont = a0.arg_principal; // ~0: the determinant is positive here
    double prev = a0.arg_principal;
    DetAccum ak = a0;
    for (int j = 1; j <= K; ++j) {
        ak = lu_at(v, x, y * j / K, t, bits);
        cont += wrap_pi(ak.arg_principal - prev);
        prev = ak.arg_principal;
    }
    return {cont, ak};
}

// Subset scan: Gray-code walk over all 2^N subsets maintaining the running
// sums that enter the minor exponents.
template <typename F>
void subset_scan(const DataView& v, const std::vector<double>& g, F&& visit) {
    const int n = v.N;
    std::vector<double> grow(n, 0.0); // sum over members of g[j][*]
    std::vector<char> in(n, 0);
    double sumK = 0, sumQ = 0, sumTh = 0, sumG = 0;
    visit(0.0, 0.0, 0.0, 0.0); // empty set
    const unsigned long total = 1ul << n;
    unsigned long gray = 0;
    for (unsigned long i = 1; i < total; ++i) {
        unsigned long next = i ^ (i >> 1);
        int j = __builtin_ctzl(gray ^ next);
        gray = next;
        if (in[j]) {
            in[j] = 0;
            sumK -= v.kappa[j]; sumQ -= v.q[j]; sumTh -= v.theta[j];
            sumG -= 2.0 * grow[j] - g[j * n + j];
            for (int k = 0; k < n; ++k) grow[k] -= g[k * n + j];
        } else {
            in[j] = 1;
            for (int k = 0; k < n; ++k) grow[k] += g[k * n + j];
            sumG += 2.0 * grow[j] - g[j * n + j];
            sumK += v.kappa[j]; sumQ += v.q[j]; sumTh += v.theta[j];
        }
        visit(sumK, sumQ, sumTh, sumG);
    }
}

} // namespace

int recommended_precision_bits(const ScatteringData& data, double x_abs_max) {
    DataView v(data);
    double max_theta = 0.0;
    for (double th : v.theta) max_theta = std::max(max_theta, std::abs(th));
    double budget = (2.0 / M_LN2) * (max_theta / v.eps + v.N * v.kappa_star * x_abs_max / v.eps);
    return 64 + static_cast<int>(std::ceil(budget));
}

int EnsembleConfig::resolve_bits() const {
    double X = std::max(std::abs(x_lo), std::abs(x_hi));
    int rec = recommended_precision_bits(data, X);
    if (precision_bits <= 0) return std::max(128, rec);
    if (precision_bits < rec)
        std::fprintf(stderr,
                     "ensemble: requested %d bits below the recommended %d for this window\n",
                     precision_bits, rec);
    return std::max(128, precision_bits);
}

DeltaFactor delta_matrix(const ScatteringData& data, std::complex<double> z, double t,
                         int precision_bits) {
    (void)precision_bits; // the factor is exact in log form
    DataView v(data);
    check_strip(v, z);
    DeltaFactor f;
    f.N = v.N;
    f.eps = v.eps;
    f.log_D.reserve(v.N);
    for (int n = 0; n < v.N; ++n)
        f.log_D.push_back(std::complex<double>(0.5 * v.logc[n], 0.0) -
                          v.kappa[n] * z / v.eps -
                          std::complex<double>(v.q[n] * t / v.eps, 0.0));
    f.C.resize(static_cast<size_t>(v.N) * v.N);
    for (int n = 0; n < v.N; ++n)
        for (int l = 0; l < v.N; ++l)
            f.C[n * v.N + l] =
                std::complex<double>(0.0, 1.0) / (v.zeta[l] - std::conj(v.zeta[n]));
    return f;
}

std::complex<double> delta_entry(const DeltaFactor& f, int n, int l) {
    if (n < 0 || n >= f.N || l < 0 || l >= f.N)
        throw std::domain_error("delta_entry: index out of range");
    return std::exp(f.log_D[n] + f.log_D[l]) * f.C[n * f.N + l];
}

LogDetResult log_det_Z(const ScatteringData& data, std::complex<double> z, double t,
                       int precision_bits) {
    DataView v(data);
    check_strip(v, z);
    int bits = std::max(precision_bits, 128);
    LogDetResult out;
    out.precision_bits = bits;
    if (v.N == 0) return out;
    ScopedPrecision scope(bits);
    ArgTrack tr = track_arg(v, z.real(), z.imag(), t, bits);
    out.log_mag = tr.last.log_mag;
    out.arg = (z.imag() == 0.0) ? 0.0 : tr.arg;
    return out;
}

LogDetResult fredholm_sum(const ScatteringData& data, std::complex<double> z, double t) {
    DataView v(data);
    if (v.N > 20) throw std::length_error("fredholm_sum: 2^N terms, N must be <= 20");
    LogDetResult out;
    out.precision_bits = 53;
    if (v.N == 0) return out;
    std::vector<double> g = pair_kernel(v);
    const double x = z.real(), y = z.imag();

    // Pass 1: magnitude exponents and phase rates of all subset terms.
    std::vector<double> ms, ks;
    ms.reserve(1ul << v.N);
    ks.reserve(1ul << v.N);
    double m_max = -1e300;
    subset_scan(v, g, [&](double sK, double sQ, double sTh, double sG) {
        double m = -(2.0 / v.eps) * (x * sK + t * sQ - sTh) - sG;
        ms.push_back(m);
        ks.push_back(sK);
        m_max = std::max(m_max, m);
    });

    // Drop terms too small to move the total.
    std::vector<std::pair<double, double>> terms; // (weight, phase rate)
    for (size_t i = 0; i < ms.size(); ++i)
        if (ms[i] > m_max - 60.0) terms.emplace_back(std::exp(ms[i] - m_max), ks[i]);

    // Continuous argument: march Im z from 0, unwrapping principal values.
    int K = (y == 0.0) ? 0 : homotopy_steps(v, y);
    double cont = 0.0, prev = 0.0;
    std::complex<double> total(0.0, 0.0);
    for (int j = (y == 0.0 ? 0 : 1); j <= K || j == 0; ++j) {
        double yj = (K == 0) ? 0.0 : y * j / K;
        total = {0.0, 0.0};
        for (const auto& [w, sK] : terms)
            total += w * std::polar(1.0, -2.0 * sK * yj / v.eps);
        double p = std::arg(total);
        if (j == 0) { cont = p; break; }
        if (j == 1) { cont = 0.0; prev = 0.0; } // arg at y=0 is 0 (positive sum)
        cont += wrap_pi(p - prev);
        prev = p;
        if (j == K) break;
    }
    out.log_mag = m_max + std::log(std::abs(total));
    out.arg = (y == 0.0) ? 0.0 : cont;
    return out;
}

SubsetEnergy discrete_energy(const ScatteringData& data, const std::vector<int>& subset,
                             double x, double t) {
    DataView v(data);
    std::set<int> s(subset.begin(), subset.end());
    if (s.size() != subset.size())
        throw std::domain_error("discrete_energy: repeated index in subset");
    for (int n : s)
        if (n < 0 || n >= v.N) throw std::domain_error("discrete_energy: index out of range");
    std::vector<double> g = pair_kernel(v);
    SubsetEnergy e;
    double sumV = 0.0, sumG = 0.0;
    for (int n : s) {
        sumV += x * v.kappa[n] + t * v.q[n] - v.theta[n];
        e.P += v.eps * pi * v.kappa[n];
        e.Q += v.eps * pi * v.q[n];
        for (int l : s) sumG += g[n * v.N + l];
    }
    e.E = v.eps * pi * sumV + 0.5 * v.eps * v.eps * pi * sumG;
    return e;
}

std::vector<double> ensemble_field(const ScatteringData& data,
                                   const std::vector<double>& x_grid, double t,
                                   int precision_bits) {
    DataView v(data);
    if (x_grid.empty()) return {};
    int bits = std::max(precision_bits, 128);
    ScopedPrecision scope(bits);
    const double y = v.delta * v.eps;

    // Uniform grids fine enough share one argument march; otherwise each
    // output point gets a private five-point stencil.
    bool uniform = x_grid.size() >= 2;
    double h = uniform ? x_grid[1] - x_grid[0] : 0.0;
    if (uniform) {
        for (size_t i = 1; i < x_grid.size(); ++i)
            if (std::abs((x_grid[i] - x_grid[i - 1]) - h) > 1e-9 * std::max(1.0, std::abs(h)))
                uniform = false;
        if (h <= 0.0 || h > v.eps / 20.0 * (1.0 + 1e-12)) uniform = false;
    }

    // 2 eps * arg Z(x + i y) equals the symmetric finite difference of the
    // free energy; the outer d/dx is the 4th-order central stencil.
    auto stencil = [&](const double* gvals, double step) {
        return 2.0 * v.eps *
               (-gvals[4] + 8.0 * gvals[3] - 8.0 * gvals[1] + gvals[0]) / (12.0 * step);
    };

    std::vector<double> u(x_grid.size());
    if (uniform) {
        std::vector<double> xs;
        xs.push_back(x_grid.front() - 2.0 * h);
        xs.push_back(x_grid.front() - h);
        xs.insert(xs.end(), x_grid.begin(), x_grid.end());
        xs.push_back(x_grid.back() + h);
        xs.push_back(x_grid.back() + 2.0 * h);
        std::vector<double> garg(xs.size());
        // Seed the argument at the right edge (Z -> 1 there), then march left.
        ArgTrack seed = track_arg(v, xs.back(), y, t, bits);
        garg.back() = seed.arg;
        double prev = seed.last.arg_principal;
        for (size_t i = xs.size() - 1; i-- > 0;) {
            DetAccum a = lu_at(v, xs[i], y, t, bits);
            garg[i] = garg[i + 1] + wrap_pi(a.arg_principal - prev);
            prev = a.arg_principal;
        }
        for (size_t i = 0; i < x_grid.size(); ++i) {
            double five[5] = {garg[i], garg[i + 1], garg[i + 2], garg[i + 3], garg[i + 4]};
            u[i] = stencil(five, h);
        }
    } else {
        double hs = v.eps / 40.0;
        for (size_t i = 0; i < x_grid.size(); ++i) {
            double xc = x_grid[i];
            double pts[5] = {xc - 2.0 * hs, xc - hs, xc, xc + hs, xc + 2.0 * hs};
            double five[5] = {0, 0, 0, 0, 0};
            ArgTrack seed = track_arg(v, pts[4], y, t, bits);
            five[4] = seed.arg;
            double prev = seed.last.arg_principal;
            for (int j = 3; j >= 0; --j) {
                if (j == 2) continue; // center value unused by the stencil
                DetAccum a = lu_at(v, pts[j], y, t, bits);
                five[j] = five[j + 1 + (j == 1 ? 1 : 0)] + wrap_pi(a.arg_principal - prev);
                prev = a.arg_principal;
            }
            u[i] = stencil(five, hs);
        }
    }
    return u;
}

BoundsReport bounds_check(const ScatteringData& data, std::complex<double> z, double t,
                          int precision_bits) {
    DataView v(data);
    check_strip(v, z);
    if (v.N > 20) throw std::length_error("bounds_check: subset minimization needs N <= 20");
    LogDetResult ld = log_det_Z(data, z, t, precision_bits);

    std::vector<double> g = pair_kernel(v);
    const double x = z.real(), y = z.imag();
    double e_min = 0.0; // empty subset
    subset_scan(v, g, [&](double sK, double sQ, double sTh, double sG) {
        double e = v.eps * pi * (x * sK + t * sQ - sTh) + 0.5 * v.eps * v.eps * pi * sG;
        e_min = std::min(e_min, e);
    });

    double theta_d = 2.0 * v.kappa_star * std::abs(y) / v.eps;
    double d = (theta_d <= pi / 2.0) ? 1.0 : std::sin(theta_d);
    BoundsReport r;
    r.log_abs_Z = ld.log_mag;
    r.arg_Z = ld.arg;
    r.log_lower = v.N * std::log(d);
    r.log_upper = v.N * std::log(2.0) - (2.0 / (v.eps * v.eps * pi)) * e_min;
    r.arg_bound = v.N * theta_d;
    r.margin_lower = r.log_abs_Z - r.log_lower;
    r.margin_upper = r.log_upper - r.log_abs_Z;
    double sgn_y = (y > 0.0) ? 1.0 : (y < 0.0 ? -1.0 : 0.0);
    r.margin_arg_lo = -sgn_y * r.arg_Z;
    r.margin_arg_hi = r.arg_bound + sgn_y * r.arg_Z;
    double tol = 1e-9 * (1.0 + std::abs(r.log_abs_Z) + r.arg_bound);
    r.ok = r.margin_lower >= -tol && r.margin_upper >= -tol && r.margin_arg_lo >= -tol &&
           r.margin_arg_hi >= -tol;
    return r;
}

} // namespace ilw
