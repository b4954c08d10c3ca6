#pragma once

#include <complex>
#include <limits>
#include <functional>
#include <string>
#include <vector>

namespace ilw {

// Input description for build_profile: a named analytic lobe with parameters,
// or tabulated samples interpolated monotonically.
struct ProfileSpec {
    std::string kind = "sech2"; // "sech2" | "gauss" | "tabulated"
    double amplitude = 1.0;
    double center = 0.0;
    double width = 1.0;
    std::vector<double> xs; // tabulated only
    std::vector<double> us; // tabulated only
};

// Positive single-lobed initial condition with decaying tails. Immutable
// after construction; evaluations are thread-safe.
struct AdmissibleProfile {
    std::function<double(double)> u0;
    std::function<double(double)> du0;
    double x_max = 0.0;
    double u_max = 0.0;
    double decay_certificate = 0.0; // integral of (x^2+1) u0 dx
    // Cached by build_profile; NaN means "compute on demand".
    double t_c = std::numeric_limits<double>::quiet_NaN();
};

// Validates positivity, single-lobedness and tail decay on a 4096-point grid
// spanning x_max +- 30; throws std::domain_error naming the first violated
// invariant.
AdmissibleProfile build_profile(const ProfileSpec& spec);

// Roots of u0(x) = E(zeta) on both sides of the maximum. When the level lies
// below the profile values at the grid bounds x_max +- 30, the bounds are
// returned with clamped = true.
struct TurningPoints {
    double x_minus = 0.0;
    double x_plus = 0.0;
    bool clamped = false;
};
TurningPoints turning_points(const AdmissibleProfile& profile,
                             std::complex<double> zeta, double delta);

// Same root solve for a caller-supplied level E directly.
TurningPoints turning_points_level(const AdmissibleProfile& profile, double E);

// First time 1/max(-2 u0') at which characteristics cross.
double catastrophe_time(const AdmissibleProfile& profile);

// Method-of-characteristics solution of u_t + 2 u u_x = 0: returns u0(y)
// where x = y + 2 u0(y) t. Valid for 0 <= t < catastrophe_time(profile).
double burgers_eval(const AdmissibleProfile& profile, double x, double t);

// Derivative d/dx of the characteristic solution at (x, t).
double burgers_slope(const AdmissibleProfile& profile, double x, double t);

} // namespace ilw
