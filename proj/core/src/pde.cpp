#include "ilw/pde.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

namespace ilw {

namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;

void check_field(const Field& f) {
    if (f.n_x < 16) throw std::domain_error("field: need at least 16 samples");
    if (static_cast<int>(f.values.size()) != f.n_x)
        throw std::domain_error("field: sample count does not match n_x");
    if (!(f.L > 0.0)) throw std::domain_error("field: domain length must be positive");
    for (double v : f.values)
        if (!std::isfinite(v)) throw std::domain_error("field: non-finite sample");
}

// FFTW plan pair plus scratch buffers for one grid size, cached so the cost
// of planning is paid once per resolution instead of per step.
class Spectral {
public:
    explicit Spectral(int n) : n_(n) {
        real_ = fftw_alloc_real(n);
        spec_ = fftw_alloc_complex(n / 2 + 1);
        fwd_ = fftw_plan_dft_r2c_1d(n, real_, spec_, FFTW_ESTIMATE);
        inv_ = fftw_plan_dft_c2r_1d(n, spec_, real_, FFTW_ESTIMATE);
    }
    ~Spectral() {
        fftw_destroy_plan(fwd_);
        fftw_destroy_plan(inv_);
        fftw_free(real_);
        fftw_free(spec_);
    }
    Spectral(const Spectral&) = delete;
    Spectral& operator=(const Spectral&) = delete;

    std::vector<std::complex<double>> forward(const std::vector<double>& u) {
        std::copy(u.begin(), u.end(), real_);
        fftw_execute(fwd_);
        std::vector<std::complex<double>> out(n_ / 2 + 1);
        for (int m = 0; m <= n_ / 2; ++m) out[m] = {spec_[m][0], spec_[m][1]};
        return out;
    }

    // c2r destroys its input; the caller's copy is consumed by value.
    std::vector<double> inverse(std::vector<std::complex<double>> s) {
        for (int m = 0; m <= n_ / 2; ++m) {
            spec_[m][0] = s[m].real();
            spec_[m][1] = s[m].imag();
        }
        fftw_execute(inv_);
        std::vector<double> out(n_);
        for (int i = 0; i < n_; ++i) out[i] = real_[i] / n_;
        return out;
    }

private:
    int n_;
    double* real_;
    fftw_complex* spec_;
    fftw_plan fwd_, inv_;
};

Spectral& spectral_for(int n) {
    static std::mutex mu;
    static std::map<int, std::unique_ptr<Spectral>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& p = cache[n];
    if (!p) p = std::make_unique<Spectral>(n);
    return *p;
}

// Conservative advection right-hand side -(u^2)_x, pseudospectral with the
// 2/3 rule applied before squaring and to the derivative.
std::vector<double> advect_rhs(Spectral& sp, const std::vector<double>& u, int n,
                               double L) {
    int cut = n / 3;
    auto s = sp.forward(u);
    for (int m = cut + 1; m <= n / 2; ++m) s[m] = 0.0;
    auto ud = sp.inverse(s);
    for (double& v : ud) v *= v;
    auto w = sp.forward(ud);
    for (int m = 0; m <= n / 2; ++m) {
        double k = kTwoPi * m / L;
        w[m] *= std::complex<double>(0.0, -k);
    }
    for (int m = cut + 1; m <= n / 2; ++m) w[m] = 0.0;
    if (n % 2 == 0) w[n / 2] = 0.0; // odd multiplier: no real Nyquist image
    return sp.inverse(std::move(w));
}

// Exact flow of u_t = -eps T[u_xx] over dt: phase rotation by
// eps tau(delta eps k) k^2 dt per mode. The Nyquist mode is real-valued and
// evolves with the cosine of the phase.
void linear_flow(Spectral& sp, std::vector<double>& u, int n, double L, double eps,
                 double delta, double dt) {
    auto s = sp.forward(u);
    for (int m = 1; m <= n / 2; ++m) {
        double k = kTwoPi * m / L;
        double phase = eps * tau(delta * eps * k) * k * k * dt;
        if (n % 2 == 0 && m == n / 2)
            s[m] *= std::cos(phase);
        else
            s[m] *= std::polar(1.0, phase);
    }
    u = sp.inverse(std::move(s));
}

} // namespace

double tau(double k) {
    if (k == 0.0) return 0.0;
    if (std::abs(k) < 1e-4) return k / 3.0 - k * k * k / 45.0;
    return 1.0 / std::tanh(k) - 1.0 / k;
}

Field apply_T(const Field& field) {
    check_field(field);
    Spectral& sp = spectral_for(field.n_x);
    auto s = sp.forward(field.values);
    for (int m = 0; m <= field.n_x / 2; ++m) {
        double k = kTwoPi * m / field.L;
        s[m] *= std::complex<double>(0.0, tau(field.delta * field.eps * k));
    }
    if (field.n_x % 2 == 0) s[field.n_x / 2] = 0.0;
    Field out = field;
    out.values = sp.inverse(std::move(s));
    return out;
}

Field step(const Field& field, double dt) {
    check_field(field);
    if (!(dt > 0.0)) throw std::domain_error("step: dt must be positive");
    double umax = 0.0;
    for (double v : field.values) umax = std::max(umax, std::abs(v));
    double dx = field.L / field.n_x;
    if (umax > 0.0 && dt > 0.5 * dx / (2.0 * umax))
        throw std::domain_error("step: dt violates the advective CFL bound");

    Spectral& sp = spectral_for(field.n_x);
    int n = field.n_x;
    std::vector<double> u = field.values;
    linear_flow(sp, u, n, field.L, field.eps, field.delta, 0.5 * dt);

    std::vector<double> k1 = advect_rhs(sp, u, n, field.L);
    std::vector<double> stage(n);
    for (int i = 0; i < n; ++i) stage[i] = u[i] + 0.5 * dt * k1[i];
    std::vector<double> k2 = advect_rhs(sp, stage, n, field.L);
    for (int i = 0; i < n; ++i) stage[i] = u[i] + 0.5 * dt * k2[i];
    std::vector<double> k3 = advect_rhs(sp, stage, n, field.L);
    for (int i = 0; i < n; ++i) stage[i] = u[i] + dt * k3[i];
    std::vector<double> k4 = advect_rhs(sp, stage, n, field.L);
    for (int i = 0; i < n; ++i)
        u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);

    linear_flow(sp, u, n, field.L, field.eps, field.delta, 0.5 * dt);

    double unew = 0.0;
    for (double v : u) unew = std::max(unew, std::abs(v));
    if (!std::isfinite(unew) || (umax > 0.0 && unew > 10.0 * umax))
        throw std::runtime_error("step: unstable growth, reduce dt or refine the grid");

    Field out = field;
    out.values = std::move(u);
    out.t = field.t + dt;
    return out;
}

std::pair<double, double> conserved(const Field& field) {
    check_field(field);
    double dx = field.L / field.n_x;
    double mass = 0.0, sq = 0.0;
    for (double v : field.values) {
        mass += v;
        sq += v * v;
    }
    return {mass * dx, std::sqrt(sq * dx)};
}

Trajectory simulate(const Field& initial, double dt, double t_end,
                    const std::vector<double>& snapshot_times) {
    check_field(initial);
    if (!(dt > 0.0)) throw std::domain_error("simulate: dt must be positive");
    if (!(t_end >= 0.0)) throw std::domain_error("simulate: t_end must be nonnegative");

    long nfull = static_cast<long>(std::floor(t_end / dt + 1e-9));
    double rem = t_end - nfull * dt;
    bool partial = rem > 1e-12 * std::max(1.0, t_end);
    long total = nfull + (partial ? 1 : 0);

    std::vector<long> snap_step(snapshot_times.size());
    for (std::size_t i = 0; i < snapshot_times.size(); ++i) {
        double ts = snapshot_times[i];
        long k = std::clamp(std::lround(ts / dt), 0l, nfull);
        // The last step may be shorter than dt; it can still be the closest.
        if (partial && std::abs(t_end - ts) < std::abs(k * dt - ts)) k = total;
        snap_step[i] = k;
    }

    Trajectory traj;
    Field f = initial;
    auto record = [&](long k) {
        for (std::size_t i = 0; i < snap_step.size(); ++i)
            if (snap_step[i] == k) traj.snapshots.push_back(f);
        if (k % 100 == 0 || k == total) {
            auto [mass, l2] = conserved(f);
            traj.conserved_log.push_back({f.t, mass, l2});
        }
    };
    // Snapshots arrive in step order; reorder to the requested sequence after.
    record(0);
    for (long k = 1; k <= total; ++k) {
        f = step(f, (partial && k == total) ? rem : dt);
        record(k);
    }

    // record() appends by step index; map back to the request order.
    std::vector<Field> ordered;
    ordered.reserve(traj.snapshots.size());
    std::vector<long> sorted = snap_step;
    std::sort(sorted.begin(), sorted.end());
    for (long want : snap_step) {
        std::size_t pos = std::lower_bound(sorted.begin(), sorted.end(), want) -
                          sorted.begin();
        ordered.push_back(traj.snapshots[pos]);
    }
    traj.snapshots = std::move(ordered);
    return traj;
}

Trajectory simulate(const SimConfig& config) {
    AdmissibleProfile prof = build_profile(config.profile);
    Field init;
    init.L = config.L;
    init.n_x = config.n_x;
    init.eps = config.eps;
    init.delta = config.delta;
    init.t = 0.0;
    init.values.resize(config.n_x);
    double dx = config.L / config.n_x;
    for (int i = 0; i < config.n_x; ++i)
        init.values[i] = prof.u0(-0.5 * config.L + i * dx);
    return simulate(init, config.dt, config.t_end, config.snapshot_times);
}

} // namespace ilw
