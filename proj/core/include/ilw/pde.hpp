#pragma once

#include "ilw/profile.hpp"

#include <utility>
#include <vector>

namespace ilw {

// Real field sampled on the uniform periodic grid x_i = -L/2 + i L/n_x.
struct Field {
    double L = 0.0;
    int n_x = 0;
    std::vector<double> values;
    double t = 0.0;
    double eps = 0.0;
    double delta = 0.0;
};

// Dispersion kernel factor coth(k) - 1/k: odd, exactly zero at k = 0, Taylor
// series below |k| = 1e-4 where the direct form cancels catastrophically.
double tau(double k);

// The nonlocal operator: Fourier mode k picks up the factor i tau(delta eps k).
// The Nyquist bin has no real-valued image under an odd multiplier and is
// dropped.
Field apply_T(const Field& field);

// One Strang step of u_t + 2 u u_x + eps T[u_xx] = 0: exact linear half-step
// in Fourier space (phase eps tau(delta eps k) k^2 dt/2), RK4 on the
// dealiased conservative advection -(u^2)_x, second linear half-step.
// Requires dt <= dx / (4 max|u|); throws runtime_error when a step grows the
// amplitude more than tenfold.
Field step(const Field& field, double dt);

// (mass, L2 norm) by the periodic trapezoidal rule.
std::pair<double, double> conserved(const Field& field);

struct SimConfig {
    ProfileSpec profile;
    double eps = 0.05;
    double delta = 1.0;
    double L = 12.0;
    int n_x = 2000;
    double dt = 1e-4;
    double t_end = 1.5;
    std::vector<double> snapshot_times;
};

struct ConservedSample {
    double t = 0.0;
    double mass = 0.0;
    double l2 = 0.0;
};

struct Trajectory {
    std::vector<Field> snapshots;           // one per requested time, in order
    std::vector<ConservedSample> conserved_log; // every 100 steps plus endpoints
};

// Integrate the sampled profile (or explicit initial data) with fixed steps,
// recording each snapshot at the step closest to its requested time. A
// trailing partial step covers t_end when it is not a step multiple.
Trajectory simulate(const SimConfig& config);
Trajectory simulate(const Field& initial, double dt, double t_end,
                    const std::vector<double>& snapshot_times);

} // namespace ilw
