#include "latnet/residuated.hpp"

#include <algorithm>

namespace latnet {

using xr::neg_inf;
using xr::pos_inf;

ScalarResiduated tnorm_product() {
  ScalarResiduated r;
  r.name = "product";
  r.bot = 0;
  r.top = 1;
  r.unit = 1;
  r.star = [](double s, double t) { return s * t; };
  r.residual = [](double s, double t) { return s > t ? t / s : 1.0; };
  return r;
}

ScalarResiduated tnorm_lukasiewicz() {
  ScalarResiduated r;
  r.name = "lukasiewicz";
  r.bot = 0;
  r.top = 1;
  r.unit = 1;
  r.star = [](double s, double t) { return std::max(s + t - 1.0, 0.0); };
  r.residual = [](double s, double t) { return std::min(1.0 - s + t, 1.0); };
  return r;
}

ScalarResiduated tnorm_min() {
  ScalarResiduated r;
  r.name = "min";
  r.bot = 0;
  r.top = 1;
  r.unit = 1;
  r.star = [](double s, double t) { return std::min(s, t); };
  r.residual = [](double s, double t) { return s > t ? t : 1.0; };
  return r;
}

ScalarResiduated boolean_algebra() {
  ScalarResiduated r = tnorm_min();
  r.name = "boolean";
  return r;
}

ScalarResiduated maxplus_algebra() {
  ScalarResiduated r;
  r.name = "maxplus";
  r.bot = neg_inf;
  r.top = pos_inf;
  r.unit = 0;
  // Star aggregates under joins, so mixed infinities resolve low.
  r.star = [](double s, double t) { return xr::add_lo(s, t); };
  // residual(s, t) = sup{ x : x + s <= t }. The infinite cases follow from
  // evaluating that supremum directly under the add_lo convention.
  r.residual = [](double s, double t) {
    if (s == neg_inf) return pos_inf;          // x + (-inf) = -inf <= t always
    if (t == pos_inf) return pos_inf;
    if (s == pos_inf) return neg_inf;          // only x = -inf survives
    if (t == neg_inf) return neg_inf;
    return t - s;
  };
  return r;
}

std::vector<double> integral_transform(const ScalarResiduated& R,
                                       const std::vector<double>& H,
                                       const std::vector<double>& f) {
  const std::size_t n = f.size();
  if (H.size() != n * n)
    throw ShapeMismatch("kernel must be n x n for a signal of length n");
  std::vector<double> out(n, R.bot);
  for (std::size_t x = 0; x < n; ++x)
    for (std::size_t y = 0; y < n; ++y)
      out[x] = std::max(out[x], R.star(H[x * n + y], f[y]));
  return out;
}

std::vector<double> adjoint_transform(const ScalarResiduated& R,
                                      const std::vector<double>& H,
                                      const std::vector<double>& g) {
  const std::size_t n = g.size();
  if (H.size() != n * n)
    throw ShapeMismatch("kernel must be n x n for a signal of length n");
  std::vector<double> out(n, R.top);
  for (std::size_t y = 0; y < n; ++y)
    for (std::size_t x = 0; x < n; ++x)
      out[y] = std::min(out[y], R.residual(H[x * n + y], g[x]));
  return out;
}

}  // namespace latnet
