#pragma once

#include <vector>

#include "latnet/residuated.hpp"

namespace latnet {

// Dense matrix over the max-plus extended reals.
struct MaxPlusMatrix {
  int rows = 0, cols = 0;
  std::vector<double> a;  // row-major

  static MaxPlusMatrix filled(int rows, int cols, double v = xr::neg_inf) {
    return {rows, cols, std::vector<double>(std::size_t(rows) * cols, v)};
  }
  static MaxPlusMatrix identity(int n) {
    auto m = filled(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 0;
    return m;
  }
  double& at(int i, int j) { return a[std::size_t(i) * cols + j]; }
  double at(int i, int j) const { return a[std::size_t(i) * cols + j]; }
};

// (A join-apply x)_i = JOIN_j a_ij + x_j, with mixed infinities resolving
// toward -inf (the identity of the outer join).
std::vector<double> maxplus_apply(const MaxPlusMatrix& A, const std::vector<double>& x);

// Upper adjoint (A-dagger meet-apply y)_j = MEET_i (-a_ij + y_i), mixed
// infinities resolving toward +inf. Satisfies
//   A join-apply x <= y  iff  x <= A-dagger meet-apply y.
std::vector<double> maxplus_dual_apply(const MaxPlusMatrix& A, const std::vector<double>& y);

// a-dagger_ij = -a_ji.
MaxPlusMatrix maxplus_dagger(const MaxPlusMatrix& A);

// Alternating method: heat flow on the two-node diagram
//   R^n --A--> R^k <--B-- R^m
// from above. Each step meets the current state with the Laplacian image
//   (x, y) <- ( x min A'(B x-apply y), y min B'(A x-apply x) )
// computed from the pre-step state, and stops when A x-apply x equals
// B x-apply y (a section: the two images synchronize) or the state stops
// changing.
struct AlternatingResult {
  std::vector<double> x, y;
  int steps = 0;
  bool synchronized = false;
};
AlternatingResult maxplus_alternating(const MaxPlusMatrix& A, const MaxPlusMatrix& B,
                                      std::vector<double> x0, std::vector<double> y0,
                                      int max_steps = 1000, double tol = 1e-9);

}  // namespace latnet
