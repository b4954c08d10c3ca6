#pragma once

#include "ilw/profile.hpp"

#include <complex>
#include <vector>

namespace ilw {

// Continuum charge density sampled on a quadrature grid over [0, kappa_max].
// The node list may contain one repeated interior entry marking a panel
// break (a derivative kink of the sampled function, e.g. a band edge);
// interpolation and quadrature stay panel-local. Weights integrate smooth
// panel-wise functions against dkappa.
struct SampledDensity {
    std::vector<double> kappa_nodes;
    std::vector<double> values;
    std::vector<double> weights;
    double delta = 0.0;
};

// Phase-space density of states sampled on a single panel of n nodes.
SampledDensity sample_weyl_density(const AdmissibleProfile& profile, double delta,
                                   int n = 256);

// The energy-minimizing density at (x, t), sampled with a panel break at the
// band edge so the kink never crosses an interpolation interval.
SampledDensity sample_min_density(const AdmissibleProfile& profile, double x,
                                  double t, double delta, int n = 256);

// Panel-local monotone interpolation of the sampled values.
double density_at(const SampledDensity& rho, double kappa);

// Logarithmic potential (1/pi) Integral log|(lambda - conj zeta(eta)) /
// (lambda - zeta(eta))| rho(eta) deta. Real lambda gives exactly 0; for
// lambda on the curve the integrable log singularity is subtracted and
// integrated in closed form.
double potential_L(const SampledDensity& rho, std::complex<double> lambda);

// Quadratic energy E = Integral (V + L[rho]/2) rho dkappa with the external
// potential V(zeta; x, t) = x Im zeta + t Im[(zeta - 1/2delta)^2] - theta_+,
// and the linear moments P = Integral kappa rho, Q = Integral Im[(zeta -
// 1/2delta)^2] rho.
double functional_E(const SampledDensity& rho, double x, double t,
                    const AdmissibleProfile& profile);
double functional_P(const SampledDensity& rho);
double functional_Q(const SampledDensity& rho);

// Pointwise minimizing density: (1/2) Re[zeta' E'] times the band integral
// truncated to [max(x, x_-(zeta;t)), x_+(zeta;t)], with the turning points
// advanced by the characteristic flow. Zero beyond the right turning point,
// the full phase-space density beyond the left one.
double min_density(const AdmissibleProfile& profile, double kappa, double x,
                   double t, double delta);

// Its logarithmic potential in closed form: Integral_x^inf of
// Im[zeta + W_{-1}(A(u^B(x',t)))/(2 delta)] dx'. Inside the classically
// allowed window the integrand is exactly Im zeta.
double min_potential(const AdmissibleProfile& profile, std::complex<double> zeta,
                     double x, double t, double delta);

// Frechet derivative of the energy at rho: V(zeta; x, t) + L[rho](zeta).
// Zero on bands, positive on voids, negative on saturations.
double frechet(const AdmissibleProfile& profile, const SampledDensity& rho,
               std::complex<double> zeta, double x, double t);

// Band edge on the curve from the local Burgers height u: beta =
// -(1/2delta) W_{-1}(-e^{2 delta u - 1}). Im beta is the band's kappa extent.
std::complex<double> band_edge_beta(double delta, double u);

// The same edge located independently by solving E(zeta(kappa)) = u^B(x,t).
double band_edge_kappa(const AdmissibleProfile& profile, double x, double t,
                       double delta);

enum class Phase { Void, Band, Saturation };

struct BandStructure {
    double y = 0.0;               // 2 delta u^B(x,t)
    std::complex<double> beta;    // upper band edge on the curve
    std::vector<double> kappa;    // classified nodes
    std::vector<Phase> phase;     // sign classification of the Frechet derivative
};

struct VariationalReport {
    BandStructure structure;
    double kappa_edge_geometric = 0.0; // edge from the E-level root
    double band_residual = 0.0;        // max |frechet| over predicted band nodes
    double void_margin = 0.0;          // min frechet over predicted void nodes
    double sat_margin = 0.0;           // max frechet over predicted saturation nodes
    double edge_window = 0.0;          // kappa half-width excluded around the edge
    double tol = 0.0;
    bool ok = false;
};

// Build the minimizer, classify every node by the sign of the Frechet
// derivative, and check the result against the analytic band/void/saturation
// prediction; the two independent edge computations must agree to 1e-6.
VariationalReport verify_variational(const AdmissibleProfile& profile, double x,
                                     double t, double delta, int n = 256);

// The proven weak limit of the soliton ensemble: the characteristic solution.
double distributional_limit(const AdmissibleProfile& profile, double x, double t);

// E evaluated at the re-minimized density for this (x, t); its second
// x-derivative recovers -(pi/4delta) times the distributional limit.
double minimizer_energy(const AdmissibleProfile& profile, double x, double t,
                        double delta, int n = 256);

} // namespace ilw
