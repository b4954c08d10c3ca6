#pragma once

#include <complex>

namespace ilw {

// Multi-branch complex Lambert W: w = lambert_w(n, z) solves w*exp(w) = z on
// the standard branch layout:
//   n = 0   : square-root branch point at -1/e only; cut (-inf, -1/e];
//             real-valued on (-1/e, +inf).
//   n = +-1 : branch points at -1/e (square-root) and 0 (logarithmic);
//             cut (-inf, 0]; W_{-1} is real-valued on (-1/e, 0).
//   |n| >= 2: logarithmic branch point at 0 only; cut (-inf, 0].
// Values on a cut are the limits from above the cut.
//
// Guarantees |w*exp(w) - z| <= 1e-13 * (1 + |z|) and that w lies in the range
// region of the requested branch.
//
// Throws std::domain_error for (n != 0, z == 0) and std::runtime_error if the
// iteration fails to converge or lands on the wrong branch.
std::complex<double> lambert_w(int branch, std::complex<double> z);

// Range-region classifier: the branch index whose (open) range region contains
// w. Region boundaries are the curves {-eta*cot(eta) + i*eta}; points exactly
// on a boundary are attributed to the adjacent lower-|index| region, so use
// only for interior points.
int lambert_w_region(std::complex<double> w);

} // namespace ilw
