#include "ilw/bigfloat.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace ilw {

int bits_to_digits(int precision_bits) {
    return static_cast<int>(std::ceil(precision_bits * 0.30103)) + 2;
}

ScopedPrecision::ScopedPrecision(int precision_bits)
    : saved_digits_(big::default_precision()) {
    if (precision_bits < 1) throw std::domain_error("ScopedPrecision: bits must be positive");
    big::default_precision(bits_to_digits(precision_bits));
}

ScopedPrecision::~ScopedPrecision() { big::default_precision(saved_digits_); }

bigc cmul(const bigc& a, const bigc& b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}

bigc cdiv(const bigc& a, const bigc& b) {
    big d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}

big cabs2(const bigc& a) { return a.re * a.re + a.im * a.im; }

bigc cexp(const bigc& a) {
    big m = exp(a.re);
    return {m * cos(a.im), m * sin(a.im)};
}

DetAccum logdet_dense(std::vector<bigc>& a, int n) {
    DetAccum out;
    if (n == 0) return out;

    // Scale reference: largest entry magnitude before elimination.
    big max2 = 0;
    for (const bigc& e : a) {
        big m2 = cabs2(e);
        if (m2 > max2) max2 = m2;
    }
    if (max2 == 0) throw std::domain_error("logdet_dense: zero matrix");
    big log_max = log(max2) / 2;

    big log_sum = 0;
    double arg_sum = 0.0;
    int swaps = 0;
    big floor_gap = 0;
    bool have_gap = false;

    for (int k = 0; k < n; ++k) {
        int piv = k;
        big best = cabs2(a[k * n + k]);
        for (int i = k + 1; i < n; ++i) {
            big m2 = cabs2(a[i * n + k]);
            if (m2 > best) { best = m2; piv = i; }
        }
        if (best == 0) throw std::runtime_error("logdet_dense: singular matrix");
        if (piv != k) {
            for (int j = 0; j < n; ++j) std::swap(a[k * n + j], a[piv * n + j]);
            ++swaps;
        }
        const bigc& p = a[k * n + k];
        big lp = log(best) / 2;
        log_sum += lp;
        arg_sum += atan2(p.im, p.re).convert_to<double>();
        big gap = lp - log_max;
        if (!have_gap || gap < floor_gap) { floor_gap = gap; have_gap = true; }

        for (int i = k + 1; i < n; ++i) {
            bigc f = cdiv(a[i * n + k], p);
            for (int j = k + 1; j < n; ++j) {
                const bigc& akj = a[k * n + j];
                bigc& aij = a[i * n + j];
                aij.re -= f.re * akj.re - f.im * akj.im;
                aij.im -= f.re * akj.im + f.im * akj.re;
            }
        }
    }

    if (swaps % 2 == 1) arg_sum += 3.14159265358979323846;
    out.log_mag = log_sum.convert_to<double>();
    out.arg_principal = std::remainder(arg_sum, 2.0 * 3.14159265358979323846);
    out.pivot_floor = floor_gap.convert_to<double>();
    return out;
}

} // namespace ilw
