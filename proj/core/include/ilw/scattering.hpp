#pragma once

#include "ilw/profile.hpp"
#include "ilw/quadratrix.hpp"

#include <complex>
#include <string>
#include <vector>

namespace ilw {

// Semiclassical eigenvalue count above level zeta:
// (1/4delta) Integral_{x_-}^{x_+} [W_0(A(x)) - W_{-1}(A(x))] dx with
// A(x) = -2 delta zeta exp(-2 delta (zeta + u(x))). Decreasing along the
// curve arc, zero at zeta_max, finite at the vertex 1/(2 delta).
double weyl_R(const AdmissibleProfile& profile, std::complex<double> zeta,
              double delta);

// Same with the profile advanced to time t by the characteristic flow.
double weyl_R_evolved(const AdmissibleProfile& profile, std::complex<double> zeta,
                      double delta, double t);

// Density -dR/dkappa expressed through the parameterized derivative:
// rho(kappa) = (1/2) Re[zeta' E'] Integral r(zeta; u(x)) dx with
// r = Re[W_{-1}/(1+W_{-1}) - W_0/(1+W_0)]. Nonnegative; vanishes at kappa_max.
double weyl_density(const AdmissibleProfile& profile, double kappa, double delta);

// Pointwise WKB integrands at medium value u, shared with the continuum
// (equilibrium) layer: the band integrand r = Re[W_{-1}/(1+W_{-1}) -
// W_0/(1+W_0)] and the tail integrand q = Im[zeta + W_{-1}/(2 delta)], both
// evaluated at A = -2 delta zeta exp(-2 delta (zeta + u)) with the on-curve
// negative-real snap.
double wkb_band_integrand(std::complex<double> zeta, double delta, double u);
double wkb_tail_integrand(std::complex<double> zeta, double delta, double u);

// Tail integrals: theta_+ = Im(zeta) x_+ + Integral_{x_+}^{inf} q dx and the
// mirror-positive left version theta_- = -Im(zeta) x_- + Integral_{-inf}^{x_-} q dx,
// where q = Im[zeta + (1/(2 delta)) W_{-1}(A(x))]. Both are nonnegative and
// coincide for reflection-symmetric profiles.
double tail_theta(const AdmissibleProfile& profile, std::complex<double> zeta,
                  int side, double delta);
double tail_theta_evolved(const AdmissibleProfile& profile, std::complex<double> zeta,
                          int side, double delta, double t);

// Discrete spectral data generated from the Weyl law: eps_N = R(1/2delta)/(pi N),
// levels solved from R(zeta_n) = pi (n - 1/2) eps_N, and log-domain norming
// constants log c_n = +2 theta_+(zeta_n)/eps_N (they grow exponentially in N,
// hence the log-domain storage). Reflection data is identically zero and
// therefore not represented.
struct ScatteringData {
    int N = 0;
    double delta = 0.0;
    double eps = 0.0;
    std::vector<QuadratrixPoint> eigen;
    std::vector<double> log_c;
};

ScatteringData modified_data(const AdmissibleProfile& profile, int N, double delta);

// Versioned text serialization (format "ilw-scattering v1").
std::string serialize(const ScatteringData& data);
ScatteringData parse_scattering(const std::string& text);

} // namespace ilw
