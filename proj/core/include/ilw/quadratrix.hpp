#pragma once

#include <complex>

namespace ilw {

// Point on the delta-scaled quadratrix of Hippias, the curve in the upper
// half plane where arg(2*delta*zeta) equals 2*delta*Im(zeta). Parameterized
// by the imaginary coordinate kappa.
struct QuadratrixPoint {
    double kappa = 0.0;
    std::complex<double> zeta;       // kappa*cot(2 delta kappa) + i kappa
    std::complex<double> zeta_prime; // d zeta / d kappa
    double delta = 0.0;
};

// Evaluate the curve at kappa. Requires |kappa| < pi/(2 delta); the kappa=0
// singularity is removable (zeta = 1/(2 delta)).
QuadratrixPoint quadratrix(double kappa, double delta);

// Top-right end of the curve arc reachable from a profile of height u_max:
// zeta_max = -(1/(2 delta)) W_{-1}(-exp(2 delta u_max - 1)).
std::complex<double> zeta_max(double delta, double u_max);
double kappa_max(double delta, double u_max);

// Turning-point level E(zeta) = -zeta + (1/(2 delta))(1 + log(2 delta zeta))
// with the principal logarithm. On the curve the value is real; `value`
// carries the real part and `im_residual` whatever imaginary part remained.
struct LevelE {
    double value = 0.0;
    double im_residual = 0.0;
    bool on_curve = false; // |im_residual| <= 1e-12
};
LevelE level_E(std::complex<double> zeta, double delta);

// dE/dzeta = 1/(2 delta zeta) - 1.
std::complex<double> level_E_prime(std::complex<double> zeta, double delta);

// G(eta; zeta) = -eta + zeta*exp(-2 delta (zeta - eta)).
std::complex<double> g_fun(std::complex<double> eta, std::complex<double> zeta,
                           double delta);

// Branched inverse of G: -U - (1/(2 delta)) W_n(-2 delta zeta e^{-2 delta (zeta+U)}).
// At U = 0 branch -1 returns zeta and branch 0 returns conj(zeta).
std::complex<double> g_inverse(int branch, double U, std::complex<double> zeta,
                               double delta);

// Amplitude sqrt(-W_n / (1 + W_n)) evaluated at the same Lambert-W argument
// as g_inverse. Principal square root near U -> 0+, continued across sign
// changes of the radicand by nudging U to U + 1e-9 i. Throws std::domain_error
// at the turning point where 1 + W_n vanishes.
std::complex<double> amplitude(int branch, double U, std::complex<double> zeta,
                               double delta);

} // namespace ilw
