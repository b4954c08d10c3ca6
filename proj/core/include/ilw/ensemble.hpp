#pragma once

#include "ilw/scattering.hpp"

#include <complex>
#include <vector>

namespace ilw {

// Log-domain determinant value of I + Delta at one strip point.
struct LogDetResult {
    double log_mag = 0.0; // ln|Z|
    double arg = 0.0;     // continuous argument, 0 on the real axis
    int precision_bits = 0;
};

// The soliton matrix in factorized form Delta = D C D, with the diagonal D
// kept as per-entry complex logarithms (the raw entries overflow hardware
// floats) and the Cauchy factor C stored densely.
struct DeltaFactor {
    int N = 0;
    double eps = 0.0;
    std::vector<std::complex<double>> log_D; // log D_nn, length N
    std::vector<std::complex<double>> C;     // row-major N x N
};

// Subset energy, dipole, and quadrupole of the discrete charge configuration.
struct SubsetEnergy {
    double E = 0.0;
    double P = 0.0;
    double Q = 0.0;
};

// Margins for the determinant magnitude/argument bounds; all margins are
// nonnegative when the bounds hold.
struct BoundsReport {
    double log_abs_Z = 0.0;
    double arg_Z = 0.0;
    double log_lower = 0.0;    // N log d(2 kappa* |y| / eps)
    double log_upper = 0.0;    // N log 2 - (2/eps^2 pi) E_min
    double arg_bound = 0.0;    // 2 N kappa* |y| / eps
    double margin_lower = 0.0; // log|Z| - log_lower
    double margin_upper = 0.0; // log_upper - log|Z|
    double margin_arg_lo = 0.0; // -sgn(y) arg
    double margin_arg_hi = 0.0; // arg_bound + sgn(y) arg
    bool ok = false;
};

// Evaluation window plus precision policy for ensemble computations.
struct EnsembleConfig {
    ScatteringData data;
    double t = 0.0;
    double x_lo = 0.0;
    double x_hi = 0.0;
    int precision_bits = 0; // 0 = automatic by the exponent-budget rule

    // Resolved mantissa width: automatic -> max(128, recommended); an explicit
    // request below the recommendation is honored (floored at 128) with a
    // warning on stderr.
    int resolve_bits() const;
};

// Mantissa width for which the determinant arithmetic keeps ~64 bits of
// headroom over the largest exponents the data can produce in the window.
int recommended_precision_bits(const ScatteringData& data, double x_abs_max);

DeltaFactor delta_matrix(const ScatteringData& data, std::complex<double> z, double t,
                         int precision_bits);

// Reconstruct one entry of Delta in hardware floats (test/inspection helper;
// overflows for exponents beyond double range).
std::complex<double> delta_entry(const DeltaFactor& f, int n, int l);

// det(I + Delta) at the requested precision; the argument is normalized to 0
// on the real axis and tracked continuously in Im z.
LogDetResult log_det_Z(const ScatteringData& data, std::complex<double> z, double t,
                       int precision_bits);

// Brute-force subset expansion of det(I + Delta): 2^N terms in log domain.
// Pure oracle; requires N <= 20.
LogDetResult fredholm_sum(const ScatteringData& data, std::complex<double> z, double t);

// Energy/dipole/quadrupole of one subset (0-based indices into the data).
SubsetEnergy discrete_energy(const ScatteringData& data, const std::vector<int>& subset,
                             double x, double t);

// Samples of the ensemble field u on x_grid at time t.
std::vector<double> ensemble_field(const ScatteringData& data,
                                   const std::vector<double>& x_grid, double t,
                                   int precision_bits);

// Evaluate the determinant magnitude/argument bounds at one strip point.
BoundsReport bounds_check(const ScatteringData& data, std::complex<double> z, double t,
                          int precision_bits);

} // namespace ilw
