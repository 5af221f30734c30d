#include "latnet/maxplus.hpp"

#include <algorithm>

namespace latnet {

std::vector<double> maxplus_apply(const MaxPlusMatrix& A, const std::vector<double>& x) {
  if (int(x.size()) != A.cols) throw ShapeMismatch("maxplus_apply: vector length != cols");
  std::vector<double> out(A.rows, xr::neg_inf);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j)
      out[i] = std::max(out[i], xr::add_lo(A.at(i, j), x[j]));
  return out;
}

std::vector<double> maxplus_dual_apply(const MaxPlusMatrix& A, const std::vector<double>& y) {
  if (int(y.size()) != A.rows) throw ShapeMismatch("maxplus_dual_apply: vector length != rows");
  std::vector<double> out(A.cols, xr::pos_inf);
  for (int j = 0; j < A.cols; ++j)
    for (int i = 0; i < A.rows; ++i)
      out[j] = std::min(out[j], xr::add_hi(-A.at(i, j), y[i]));
  return out;
}

MaxPlusMatrix maxplus_dagger(const MaxPlusMatrix& A) {
  auto D = MaxPlusMatrix::filled(A.cols, A.rows);
  for (int i = 0; i < A.rows; ++i)
    for (int j = 0; j < A.cols; ++j) D.at(j, i) = -A.at(i, j);
  return D;
}

AlternatingResult maxplus_alternating(const MaxPlusMatrix& A, const MaxPlusMatrix& B,
                                      std::vector<double> x0, std::vector<double> y0,
                                      int max_steps, double tol) {
  if (A.rows != B.rows) throw ShapeMismatch("edge stalks disagree: A and B need equal row counts");
  if (int(x0.size()) != A.cols || int(y0.size()) != B.cols)
    throw ShapeMismatch("initial vectors must match matrix widths");

  AlternatingResult r;
  r.x = std::move(x0);
  r.y = std::move(y0);
  auto synced = [&](const std::vector<double>& ax, const std::vector<double>& by) {
    for (int i = 0; i < A.rows; ++i)
      if (!xr::approx_eq(ax[i], by[i], tol)) return false;
    return true;
  };
  for (; r.steps < max_steps; ++r.steps) {
    auto ax = maxplus_apply(A, r.x);
    auto by = maxplus_apply(B, r.y);
    if (synced(ax, by)) {
      r.synchronized = true;
      return r;
    }
    auto lx = maxplus_dual_apply(A, by);   // A-dagger applied to B's image
    auto ly = maxplus_dual_apply(B, ax);
    bool changed = false;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
      double nx = std::min(r.x[i], lx[i]);
      changed = changed || nx != r.x[i];
      r.x[i] = nx;
    }
    for (std::size_t i = 0; i < r.y.size(); ++i) {
      double ny = std::min(r.y[i], ly[i]);
      changed = changed || ny != r.y[i];
      r.y[i] = ny;
    }
    if (!changed) break;  // fixed point that never synchronized
  }
  r.synchronized = synced(maxplus_apply(A, r.x), maxplus_apply(B, r.y));
  return r;
}

}  // namespace latnet
