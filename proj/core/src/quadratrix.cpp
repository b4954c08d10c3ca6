#include "ilw/quadratrix.hpp"

#include "ilw/lambertw.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace ilw {

namespace {
using cd = std::complex<double>;
constexpr double pi = std::numbers::pi;
} // namespace

QuadratrixPoint quadratrix(double kappa, double delta) {
    if (!(delta > 0.0)) throw std::domain_error("quadratrix: delta must be positive");
    if (!(std::abs(kappa) < pi / (2.0 * delta)))
        throw std::domain_error("quadratrix: |kappa| must be below pi/(2 delta)");
    QuadratrixPoint p;
    p.kappa = kappa;
    p.delta = delta;
    double x = 2.0 * delta * kappa;
    if (std::abs(x) < 1e-4) {
        // Taylor forms of kappa*cot(x) and its kappa-derivative around x = 0.
        double re = 1.0 / (2.0 * delta) - x * x / (6.0 * delta) -
                    x * x * x * x / (90.0 * delta);
        p.zeta = cd(re, kappa);
        double dre = -(2.0 / 3.0) * x - (4.0 / 45.0) * x * x * x;
        p.zeta_prime = cd(dre, 1.0);
    } else {
        double c = std::cos(x), s = std::sin(x);
        p.zeta = cd(kappa * c / s, kappa);
        p.zeta_prime = cd(c / s - x / (s * s), 1.0);
    }
    return p;
}

cd zeta_max(double delta, double u_max) {
    if (!(delta > 0.0) || !(u_max > 0.0))
        throw std::domain_error("zeta_max: delta and u_max must be positive");
    cd a(-std::exp(2.0 * delta * u_max - 1.0), 0.0);
    return -lambert_w(-1, a) / (2.0 * delta);
}

double kappa_max(double delta, double u_max) { return zeta_max(delta, u_max).imag(); }

LevelE level_E(cd zeta, double delta) {
    if (zeta == 0.0) throw std::domain_error("level_E: zeta must be nonzero");
    cd e = -zeta + (1.0 + std::log(2.0 * delta * zeta)) / (2.0 * delta);
    LevelE out;
    out.value = e.real();
    out.im_residual = e.imag();
    out.on_curve = std::abs(e.imag()) <= 1e-12;
    return out;
}

cd level_E_prime(cd zeta, double delta) {
    if (zeta == 0.0) throw std::domain_error("level_E_prime: zeta must be nonzero");
    return 1.0 / (2.0 * delta * zeta) - 1.0;
}

cd g_fun(cd eta, cd zeta, double delta) {
    return -eta + zeta * std::exp(-2.0 * delta * (zeta - eta));
}

namespace {

// Shared Lambert-W argument -2 delta zeta exp(-2 delta (zeta + U)). For zeta
// on the curve and real U this is exactly negative real; rounding leaves an
// imaginary residue of either sign, which would let noise pick the side of
// the Lambert-W cut. Snap it to +0 so the value continues from above.
cd wkb_arg(cd U, cd zeta, double delta) {
    cd a = -2.0 * delta * zeta * std::exp(-2.0 * delta * (zeta + U));
    if (std::abs(a.imag()) <= 1e-13 * std::abs(a.real())) a = cd(a.real(), 0.0);
    return a;
}

} // namespace

cd g_inverse(int branch, double U, cd zeta, double delta) {
    if (zeta == 0.0) throw std::domain_error("g_inverse: zeta must be nonzero");
    cd w = lambert_w(branch, wkb_arg(cd(U, 0.0), zeta, delta));
    return -U - w / (2.0 * delta);
}

cd amplitude(int branch, double U, cd zeta, double delta) {
    if (zeta == 0.0) throw std::domain_error("amplitude: zeta must be nonzero");
    cd w = lambert_w(branch, wkb_arg(cd(U, 0.0), zeta, delta));
    if (std::abs(1.0 + w) < 1e-6)
        throw std::domain_error("amplitude: turning point, 1 + W vanishes");
    cd ratio = -w / (1.0 + w);
    // The principal square root jumps across the negative real axis. When the
    // radicand sits within 1e-6 of that line, continue with the value for U
    // nudged into the upper half plane, which picks the branch continuous in
    // U + i0+.
    if (ratio.real() < 1e-6 && std::abs(ratio.imag()) <= 1e-6 * (1.0 + std::abs(ratio))) {
        cd wn = lambert_w(branch, wkb_arg(cd(U, 1e-9), zeta, delta));
        ratio = -wn / (1.0 + wn);
    }
    return std::sqrt(ratio);
}

} // namespace ilw
