#include "ilw/lambertw.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ilw {

namespace {

using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
constexpr double inv_e = 0.36787944117144233; // 1/e

// Boundary curve of the range regions at height eta: xi = -eta*cot(eta).
// Even in eta; limits to -1 as eta -> 0 and blows up toward odd multiples
// of pi (from below) / even multiples (from above), which makes the region
// classification continuous across those heights.
double boundary_xi(double eta) {
  return -eta * std::cos(eta) / std::sin(eta);
}

int region_upper(double xi, double eta) {
  // eta > 0 strictly.
  int p = static_cast<int>(std::floor(eta / pi));
  if (p % 2 == 0) {
    int m = p / 2;
    return xi >= boundary_xi(eta) ? m : m + 1;
  }
  return (p + 1) / 2;
}

// One Halley step for f(w) = w*exp(w) - z.
cd halley_step(cd w, cd z) {
  cd ew = std::exp(w);
  cd f = w * ew - z;
  cd denom = ew * (w + 1.0) - (w + 2.0) * f / (2.0 * w + 2.0);
  return w - f / denom;
}

// Series around the square-root branch point -1/e (top sheet: sign = +1 gives
// branch 0; sign = -1 gives branch -1 for Im z >= 0). p is the principal
// square root of 2(e*z + 1).
cd branch_point_seed(cd z, double sign) {
  cd p = std::sqrt(2.0 * (std::numbers::e * z + 1.0));
  if (sign < 0) p = -p;
  return -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p * p * p;
}

// Asymptotic seed w ~ L - log(L) with L the branch-n logarithm of z taken
// with arguments measured from above the cut.
cd log_seed(int n, cd z, double extra_turns) {
  double theta = std::arg(z);
  if (theta < 0.0) theta += 2.0 * pi; // unreachable for Im z >= 0; safety
  // Principal-range argument with from-above cut convention: Arg in (-pi, pi].
  if (theta > pi) theta -= 2.0 * pi;
  cd L(std::log(std::abs(z)), theta + 2.0 * pi * (n + extra_turns));
  if (std::abs(L) < 1e-300) return L; // z ~ 1, n = 0: w ~ 0
  return L - std::log(L);
}

// Core evaluation for Im z >= 0 with on-cut values continuous from above.
cd lambert_w_upper(int n, cd z) {
  // Candidate seeds, best guess first; the iteration falls through to the
  // next one whenever convergence or the branch check fails.
  cd ez1 = std::numbers::e * z + 1.0;
  cd seeds[6];
  int n_seeds = 0;
  if ((n == 0 || n == -1) && std::abs(ez1) < 0.4) {
    seeds[n_seeds++] = branch_point_seed(z, n == 0 ? +1.0 : -1.0);
  }
  if (n == 0) {
    if (std::abs(z) < 0.3) {
      // Maclaurin seed: W0(z) = z - z^2 + 3/2 z^3 - ...
      seeds[n_seeds++] = z * (1.0 - z * (1.0 - 1.5 * z));
    }
    // log(1+z) tracks the principal branch well at moderate |z| away from
    // the cut; the asymptotic seed takes over for large |z| and near the cut.
    if (z.real() > -1.0 || std::abs(z.imag()) > 1e-2) {
      seeds[n_seeds++] = std::log(1.0 + z);
    }
    seeds[n_seeds++] = log_seed(0, z, 0.0);
  } else if (n == -1) {
    if (z.imag() == 0.0 && z.real() < 0.0 && z.real() > -inv_e) {
      // Real branch: W_{-1}(x) on (-1/e, 0), w <= -1.
      double l1 = std::log(-z.real());
      seeds[n_seeds++] = cd(l1 - std::log(-l1), 0.0);
    }
    seeds[n_seeds++] = log_seed(-1, z, 0.0);
    seeds[n_seeds++] = log_seed(-1, z, 1.0);
    seeds[n_seeds++] = log_seed(-1, z, -1.0);
  } else {
    seeds[n_seeds++] = log_seed(n, z, 0.0);
    seeds[n_seeds++] = log_seed(n, z, 1.0);
    seeds[n_seeds++] = log_seed(n, z, -1.0);
  }

  for (int attempt = 0; attempt < n_seeds; ++attempt) {
    cd wk = seeds[attempt];
    bool converged = false;
    for (int it = 0; it < 50; ++it) {
      cd wn = halley_step(wk, z);
      if (!std::isfinite(wn.real()) || !std::isfinite(wn.imag())) break;
      // Near the root the iterates can cycle between adjacent representable
      // values, so accept a step of a few ulps or a residual at the noise
      // floor rather than demanding an exact fixed point.
      if (std::abs(wn - wk) <= 1e-15 * (1.0 + std::abs(wn)) ||
          std::abs(wn * std::exp(wn) - z) <= 1e-15 * (1.0 + std::abs(z))) {
        wk = wn;
        converged = true;
        break;
      }
      wk = wn;
    }
    double residual = std::abs(wk * std::exp(wk) - z);
    if (converged && residual <= 1e-13 * (1.0 + std::abs(z))) {
      // Branch verification. Near the square-root point both candidate
      // branches share the value -1; the residual is the only meaningful
      // check there.
      if (std::abs(wk + 1.0) < 1e-6 && (n == 0 || n == -1)) return wk;
      // Probe the region with the value continued upward in z:
      // dw/dz = w / (z (1 + w)).
      cd d = wk / (z * (1.0 + wk));
      cd probe = wk + cd(0.0, 1.0) * d * (1e-8 * (1.0 + std::abs(wk)) / std::abs(d));
      if (lambert_w_region(probe) == n) return wk;
    }
  }
  throw std::runtime_error("lambert_w: iteration failed to converge on the requested branch");
}

} // namespace

int lambert_w_region(cd w) {
  double xi = w.real();
  double eta = w.imag();
  if (eta == 0.0) return xi >= -1.0 ? 0 : -1;
  if (eta > 0.0) return region_upper(xi, eta);
  return -region_upper(xi, -eta);
}

cd lambert_w(int branch, cd z) {
  if (z == 0.0) {
    if (branch == 0) return 0.0;
    throw std::domain_error("lambert_w: z = 0 is a branch point for branch != 0");
  }
  if (z.imag() < 0.0) {
    // Mirror identity W_n(conj z) = conj(W_{-n}(z)) for z off the real axis.
    return std::conj(lambert_w_upper(-branch, std::conj(z)));
  }
  return lambert_w_upper(branch, z);
}

} // namespace ilw
