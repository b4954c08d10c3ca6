#pragma once

#include <complex>
#include <map>
#include <vector>

namespace ilw {

// Machinery for the model equation near a simple turning point,
//
//     0 = i eps psi_X^+ + h X psi^+ - e^{-1} psi^-,   psi^{+-}(X) = psi(X -+ i eps/2),
//
// whose Laplace-transform solutions are contour integrals of
// exp(-(i/(h eps)) f(k) + i k (Z/eps + i/2)) with f(k) = k^2/2 - e^{-k-1}.

// f(k) and the tilted phase f(k) - k*X_tilde that governs the saddle landscape.
std::complex<double> model_phase(std::complex<double> k);
std::complex<double> model_phase(std::complex<double> k, double X_tilde);

// Saddle points of the tilted phase: solutions of k + e^{-k-1} = X_tilde,
// expressed through the Lambert W branches and polished by a guarded Newton
// step so the residual is at machine level away from the fold at X_tilde = 0.
struct SaddleSet {
    double X_tilde = 0.0;
    std::map<int, std::complex<double>> points;  // branch n -> k_n
};
SaddleSet saddle_points(double X_tilde, const std::vector<int>& branches);

// A finite polyline representative of the deformed basis contour for psi_nu at
// a given X_tilde, together with the asymptotic ray directions it continues
// along at both ends. The contour for finite nu runs from the west valley at
// height pi*nu to the one at pi*(nu+2); the -infinity contour runs from the
// west valley at height -pi/2 out to the southeast ray exp(-i pi/4).
struct ContourSpec {
    double nu = 0.0;
    std::vector<std::complex<double>> waypoints;
    std::complex<double> start_direction{0.0, 0.0};  // unit ray at the first waypoint
    std::complex<double> end_direction{0.0, 0.0};    // unit ray at the last waypoint
};
ContourSpec contour_spec(double nu, double X_tilde, double eps, double h);

// A contour-integral value in scaled form: value = mantissa * exp(log_scale).
// The basis solutions span many hundreds of orders of magnitude across nu, so
// raw doubles would over- or underflow; log_scale carries the overall size.
struct PsiValue {
    std::complex<double> mantissa{0.0, 0.0};
    double log_scale = 0.0;
    double rel_error = 0.0;  // estimated relative quadrature/truncation error

    std::complex<double> value() const;  // mantissa * exp(log_scale); may overflow
};

// Basis solutions psi_nu. The label nu is either -infinity (the contour from
// the west valley at height -pi/2 out to the southeast ray exp(-i pi/4)) or a
// half-integer in 2Z - 1/2 (the hairpin contour from the west valley at height
// pi*nu to the one at pi*(nu+2)). Z must lie in the closed strip |Im Z| <= eps/2.
// The contour is assembled from numerically traced steepest-descent paths
// through the relevant saddle(s); each straight piece is integrated by
// Gauss-Kronrod with oscillation-budgeted subdivision.
PsiValue psi_fundamental(double nu, std::complex<double> Z, double eps, double h);

// Derivative of the upper boundary value with respect to X: the same integral
// with an extra factor i k / eps.
PsiValue psi_x(double nu, std::complex<double> Z, double eps, double h);

// The mirrored evaluation: the same construction run on the reflected
// landscape (conjugate saddles, reversed descent sign). Satisfies
// psi_fundamental_mirrored(nu, conj(Z)) == conj(psi_fundamental(nu, Z)).
PsiValue psi_fundamental_mirrored(double nu, std::complex<double> Z, double eps,
                                  double h);

// Residual of the model equation |i eps psi_X^+ + h X psi^+ - e^{-1} psi^-|
// divided by max(|psi^+|, |psi^-|), all three integrals taken over the same
// contour so the cancellation is measured at full precision.
double model_equation_residual(double nu, double X, double eps, double h);

// Internal scale used by psi_fundamental: exposes the deformation knob for the
// near-saddle waypoint offsets (default 1.0). Distinct scales give distinct
// polylines through the same homotopy class, so values must agree; used to
// verify contour-deformation invariance.
PsiValue psi_fundamental_scaled(double nu, std::complex<double> Z, double eps,
                                double h, double seed_scale);

// Airy function for complex argument by its Maclaurin series; accurate for
// |z| <~ 6 which covers every comparison argument used here.
std::complex<double> airy_ai(std::complex<double> z);

// Closed-form small-eps approximation of psi_nu at Z = eps^alpha chi
// + i eps (Y_tilde - 1/2), in the same scaled form as psi_fundamental.
PsiValue psi_asymptotic(double nu, double chi, double Y_tilde, double eps, double h,
                        double alpha);

// Sweep chi over a grid, evaluate both the contour integral and the
// closed-form approximation, and report pointwise relative errors.
struct AiryCompareResult {
    std::vector<double> chi;
    std::vector<std::complex<double>> psi_mantissa;      // at common log_scale
    std::vector<std::complex<double>> formula_mantissa;  // at common log_scale
    double log_scale = 0.0;
    std::vector<double> rel_error;
    double max_rel_error = 0.0;
};
AiryCompareResult airy_compare(double nu, const std::vector<double>& chi_grid,
                               double eps, double h, double alpha);

}  // namespace ilw
