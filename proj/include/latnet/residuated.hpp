#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "latnet/errors.hpp"

namespace latnet {

// Extended-real helpers. Values are IEEE doubles; +-infinity are first-class
// lattice elements (the bounds of the max-plus lattice), so comparisons on
// them are exact and only finite values get a tolerance.
namespace xr {

inline constexpr double neg_inf = -std::numeric_limits<double>::infinity();
inline constexpr double pos_inf = std::numeric_limits<double>::infinity();

// Addition with the mixed-infinities convention for join-style aggregation:
// (-inf) + (+inf) = -inf (absorbing toward the identity of max).
inline double add_lo(double a, double b) {
  if (a == neg_inf || b == neg_inf) return neg_inf;
  return a + b;
}

// Dual convention for meet-style aggregation: (-inf) + (+inf) = +inf.
inline double add_hi(double a, double b) {
  if (a == pos_inf || b == pos_inf) return pos_inf;
  return a + b;
}

inline bool approx_eq(double a, double b, double tol = 1e-9) {
  if (std::isinf(a) || std::isinf(b)) return a == b;
  return std::fabs(a - b) <= tol;
}

inline bool approx_le(double a, double b, double tol = 1e-9) {
  return a <= b || approx_eq(a, b, tol);
}

}  // namespace xr

// A residuated structure on a totally ordered scalar carrier [bot, top]:
// (carrier, min, max, bot, top) plus a commutative unital star whose
// sections x -> x * y are join-preserving, with residual satisfying
// x * y <= z iff x <= residual(y, z).
struct ScalarResiduated {
  std::string name;
  double bot = 0, top = 1, unit = 1;
  std::function<double(double, double)> star;
  std::function<double(double, double)> residual;
};

// The three t-norm structures on [0,1] and friends.
ScalarResiduated tnorm_product();      // s*t, residual t/s (clamped to 1)
ScalarResiduated tnorm_lukasiewicz();  // max(s+t-1,0), residual min(1-s+t,1)
ScalarResiduated tnorm_min();          // min, residual t when s>t else 1
ScalarResiduated boolean_algebra();    // {0,1} with AND and implication
ScalarResiduated maxplus_algebra();    // (R u {+-inf}, +, 0), residual t-s

// Integral transform against an n x n kernel H (row-major) over a finite
// index set: hat{f}(x) = JOIN_y H(x,y) * f(y), and its upper adjoint
// check{g}(y) = MEET_x residual(H(x,y), g(x)). The pair satisfies
// hat{f} <= g iff f <= check{g}.
std::vector<double> integral_transform(const ScalarResiduated& R,
                                       const std::vector<double>& H,
                                       const std::vector<double>& f);
std::vector<double> adjoint_transform(const ScalarResiduated& R,
                                      const std::vector<double>& H,
                                      const std::vector<double>& g);

}  // namespace latnet
