#pragma once

#include <boost/multiprecision/mpfr.hpp>

#include <vector>

namespace ilw {

// Software floating point with run-time mantissa width.
using big = boost::multiprecision::mpfr_float;

// Decimal digits needed to carry the requested binary mantissa.
int bits_to_digits(int precision_bits);

// RAII guard: values constructed while the guard lives get this precision.
class ScopedPrecision {
public:
    explicit ScopedPrecision(int precision_bits);
    ~ScopedPrecision();
    ScopedPrecision(const ScopedPrecision&) = delete;
    ScopedPrecision& operator=(const ScopedPrecision&) = delete;

private:
    unsigned saved_digits_;
};

// Complex value in software floats.
struct bigc {
    big re, im;
    bigc() : re(0), im(0) {}
    bigc(big r, big i) : re(std::move(r)), im(std::move(i)) {}
};

bigc cmul(const bigc& a, const bigc& b);
bigc cdiv(const bigc& a, const bigc& b);
big cabs2(const bigc& a);
bigc cexp(const bigc& a);

// In-place LU log-determinant of the dense row-major n x n matrix (destroyed).
struct DetAccum {
    double log_mag = 0.0;       // ln|det|
    double arg_principal = 0.0; // Arg(det) in (-pi, pi]
    // min over pivots of ln|pivot| - ln(max initial entry magnitude); a large
    // negative value signals cancellation beyond the mantissa's reach.
    double pivot_floor = 0.0;
};
DetAccum logdet_dense(std::vector<bigc>& a, int n);

} // namespace ilw
