#include "latnet/galois.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace latnet {

AdjunctionWitness validate_connection(const GaloisConnection& c) {
  const auto& K = *c.lower.dom;
  const auto& L = *c.lower.cod;
  for (int x = 0; x < K.m; ++x)
    for (int y = 0; y < L.m; ++y)
      if (L.le(c.lower(x), y) != K.le(x, c.upper(y)))
        return {false, x, y};
  return {};
}

GaloisConnection make_connection(MonotoneMap lower, MonotoneMap upper) {
  if (!lattice_same(*lower.cod, *upper.dom) || !lattice_same(*lower.dom, *upper.cod))
    throw ShapeMismatch("adjoint pair must run between the same two lattices");
  GaloisConnection c{std::move(lower), std::move(upper)};
  auto w = validate_connection(c);
  if (!w.ok)
    throw InvalidConnection("adjunction fails at x=" + c.lower.dom->label(w.x) +
                            ", y=" + c.lower.cod->label(w.y) + ": lower(x)<=y is " +
                            (c.lower.cod->le(c.lower(w.x), w.y) ? "true" : "false") +
                            " but x<=upper(y) is " +
                            (c.lower.dom->le(w.x, c.upper(w.y)) ? "true" : "false"));
  return c;
}

MonotoneMap adjoint_of(const MonotoneMap& f) {
  const auto& K = *f.dom;
  const auto& L = *f.cod;
  if (f(K.bot) != L.bot)
    throw NotJoinPreserving("empty join not preserved: image of bot is " +
                            L.label(f(K.bot)));
  for (int a = 0; a < K.m; ++a)
    for (int b = a + 1; b < K.m; ++b)
      if (f(K.join_of(a, b)) != L.join_of(f(a), f(b)))
        throw NotJoinPreserving("join not preserved on (" + K.label(a) + ", " +
                                K.label(b) + ")");
  std::vector<std::int32_t> tbl(L.m);
  for (int y = 0; y < L.m; ++y) {
    int acc = K.bot;
    for (int x = 0; x < K.m; ++x)
      if (L.le(f(x), y)) acc = K.join_of(acc, x);
    tbl[y] = acc;
  }
  return make_monotone(f.cod, f.dom, std::move(tbl));
}

MonotoneMap coadjoint_of(const MonotoneMap& g) {
  const auto& L = *g.dom;
  const auto& K = *g.cod;
  if (g(L.top) != K.top)
    throw NotMeetPreserving("empty meet not preserved: image of top is " +
                            K.label(g(L.top)));
  for (int a = 0; a < L.m; ++a)
    for (int b = a + 1; b < L.m; ++b)
      if (g(L.meet_of(a, b)) != K.meet_of(g(a), g(b)))
        throw NotMeetPreserving("meet not preserved on (" + L.label(a) + ", " +
                                L.label(b) + ")");
  std::vector<std::int32_t> tbl(K.m);
  for (int x = 0; x < K.m; ++x) {
    int acc = L.top;
    for (int y = 0; y < L.m; ++y)
      if (K.le(x, g(y))) acc = L.meet_of(acc, y);
    tbl[x] = acc;
  }
  return make_monotone(g.cod, g.dom, std::move(tbl));
}

GaloisConnection connection_from_lower(MonotoneMap lower) {
  auto upper = adjoint_of(lower);
  return GaloisConnection{std::move(lower), std::move(upper)};
}

GaloisConnection connection_from_upper(MonotoneMap upper) {
  auto lower = coadjoint_of(upper);
  return GaloisConnection{std::move(lower), std::move(upper)};
}

GaloisConnection identity_connection(LatticePtr L) {
  return GaloisConnection{identity_map(L), identity_map(L)};
}

GaloisConnection compose_connections(const GaloisConnection& g,
                                     const GaloisConnection& f) {
  return GaloisConnection{compose(g.lower, f.lower), compose(f.upper, g.upper)};
}

MonotoneMap closure_of(const GaloisConnection& c) { return compose(c.upper, c.lower); }

MonotoneMap coclosure_of(const GaloisConnection& c) { return compose(c.lower, c.upper); }

Relation Relation::from_pairs(int nx, int ny,
                              const std::vector<std::pair<int, int>>& pairs) {
  Relation r;
  r.nx = nx;
  r.ny = ny;
  r.tbl.assign(std::size_t(nx) * ny, 0);
  for (auto [x, y] : pairs) {
    if (x < 0 || x >= nx || y < 0 || y >= ny)
      throw ShapeMismatch("relation pair (" + std::to_string(x) + ", " +
                          std::to_string(y) + ") outside " + std::to_string(nx) + "x" +
                          std::to_string(ny));
    r.tbl[std::size_t(x) * ny + y] = 1;
  }
  return r;
}

namespace {

std::vector<std::string> ground_names(int n, const std::vector<std::string>& given,
                                      const char* side) {
  if (!given.empty()) {
    if (int(given.size()) != n)
      throw ShapeMismatch(std::string(side) + " names: wrong count");
    return given;
  }
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::string(side) + std::to_string(i));
  return out;
}

// Successor masks of the relation: succ[x] = { y : xRy } as a bitmask.
std::vector<std::uint32_t> successor_masks(const Relation& r) {
  std::vector<std::uint32_t> succ(r.nx, 0);
  for (int x = 0; x < r.nx; ++x)
    for (int y = 0; y < r.ny; ++y)
      if (r.at(x, y)) succ[x] |= 1u << y;
  return succ;
}

}  // namespace

GaloisConnection from_relation_covariant(const Relation& r,
                                         const std::vector<std::string>& x_names,
                                         const std::vector<std::string>& y_names) {
  return from_relation_covariant(r, powerset_lattice(ground_names(r.nx, x_names, "x")),
                                 powerset_lattice(ground_names(r.ny, y_names, "y")));
}

GaloisConnection from_relation_covariant(const Relation& r, const LatticePtr& PX,
                                         const LatticePtr& PY) {
  if (!PX || !PY || PX->kind != LatticeKind::powerset || PY->kind != LatticeKind::powerset ||
      PX->m != (1 << r.nx) || PY->m != (1 << r.ny))
    throw ShapeMismatch("relation shape does not match the given powerset lattices");
  auto succ = successor_masks(r);

  // R∃ over all subsets by peeling one element at a time.
  std::vector<std::int32_t> lower(PX->m, 0);
  for (int u = 1; u < PX->m; ++u) {
    int x = __builtin_ctz(unsigned(u));
    lower[u] = std::int32_t(lower[u & (u - 1)] | succ[x]);
  }
  std::vector<std::int32_t> upper(PY->m, 0);
  for (int v = 0; v < PY->m; ++v) {
    std::uint32_t mask = 0;
    for (int x = 0; x < r.nx; ++x)
      if ((succ[x] & ~std::uint32_t(v)) == 0) mask |= 1u << x;
    upper[v] = std::int32_t(mask);
  }
  return GaloisConnection{MonotoneMap{PX, PY, std::move(lower)},
                          MonotoneMap{PY, PX, std::move(upper)}};
}

GaloisConnection from_relation_contravariant(const Relation& r,
                                             const std::vector<std::string>& x_names,
                                             const std::vector<std::string>& y_names) {
  auto PX = powerset_lattice(ground_names(r.nx, x_names, "x"));
  auto PYop = opposite_lattice(powerset_lattice(ground_names(r.ny, y_names, "y")));
  auto succ = successor_masks(r);
  const std::uint32_t ally = PYop->m - 1;

  // R↑(U) intersects successor masks over U; the empty intersection is all
  // of Y, which is the bottom of the opposite lattice, so R↑ is
  // join-preserving into ℘(Y)^op.
  std::vector<std::int32_t> lower(PX->m);
  for (int u = 0; u < PX->m; ++u) {
    std::uint32_t acc = ally;
    for (std::uint32_t rest = unsigned(u); rest; rest &= rest - 1)
      acc &= succ[__builtin_ctz(rest)];
    lower[u] = std::int32_t(acc);
  }
  std::vector<std::int32_t> upper(PYop->m);
  for (int v = 0; v < PYop->m; ++v) {
    std::uint32_t mask = 0;
    for (int x = 0; x < r.nx; ++x)
      if ((std::uint32_t(v) & ~succ[x]) == 0) mask |= 1u << x;
    upper[v] = std::int32_t(mask);
  }
  return GaloisConnection{MonotoneMap{PX, PYop, std::move(lower)},
                          MonotoneMap{PYop, PX, std::move(upper)}};
}

ConceptLattice concept_lattice(const Relation& r) {
  if (std::size_t(r.nx) * r.ny > 400)
    throw TooLarge("concept lattice guard: |X|*|Y| limited to 400");

  // Extents are intersections of attribute columns (plus X itself); close
  // the column set under pairwise intersection.
  const int words = (r.nx + 63) / 64;
  auto column = [&](int y) {
    std::vector<std::uint64_t> col(words, 0);
    for (int x = 0; x < r.nx; ++x)
      if (r.at(x, y)) col[x / 64] |= 1ull << (x % 64);
    return col;
  };
  std::vector<std::uint64_t> full(words, 0);
  for (int x = 0; x < r.nx; ++x) full[x / 64] |= 1ull << (x % 64);

  std::map<std::vector<std::uint64_t>, int> seen;
  std::vector<std::vector<std::uint64_t>> extents;
  auto add = [&](const std::vector<std::uint64_t>& e) {
    if (seen.emplace(e, int(extents.size())).second) extents.push_back(e);
  };
  add(full);
  for (int y = 0; y < r.ny; ++y) add(column(y));
  for (std::size_t i = 0; i < extents.size(); ++i)
    for (std::size_t j = 0; j < i; ++j) {
      std::vector<std::uint64_t> e(words);
      for (int w = 0; w < words; ++w) e[w] = extents[i][w] & extents[j][w];
      add(e);
      if (int(extents.size()) > kMaxLatticeSize)
        throw TooLarge("concept lattice exceeds table guard");
    }

  // Deterministic element order: a linear extension by extent size, ties by
  // bit pattern.
  std::vector<int> order(extents.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  auto count = [&](const std::vector<std::uint64_t>& e) {
    int c = 0;
    for (auto w : e) c += __builtin_popcountll(w);
    return c;
  };
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    int ca = count(extents[a]), cb = count(extents[b]);
    if (ca != cb) return ca < cb;
    return extents[a] < extents[b];
  });

  const int m = int(order.size());
  std::vector<std::uint8_t> leq(std::size_t(m) * m, 0);
  auto subset = [&](const std::vector<std::uint64_t>& a, const std::vector<std::uint64_t>& b) {
    for (int w = 0; w < words; ++w)
      if (a[w] & ~b[w]) return false;
    return true;
  };
  std::vector<std::string> labels(m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j)
      leq[std::size_t(i) * m + j] = subset(extents[order[i]], extents[order[j]]);

  ConceptLattice out;
  out.concepts.resize(m);
  for (int i = 0; i < m; ++i) {
    const auto& e = extents[order[i]];
    auto& c = out.concepts[i];
    for (int x = 0; x < r.nx; ++x)
      if (e[x / 64] >> (x % 64) & 1) c.objects.push_back(x);
    // Intent: attributes shared by every object of the extent.
    for (int y = 0; y < r.ny; ++y) {
      bool all = true;
      for (int x : c.objects) all = all && r.at(x, y);
      if (all) c.attributes.push_back(y);
    }
    std::string s = "(";
    for (std::size_t k = 0; k < c.objects.size(); ++k)
      s += (k ? "," : "") + std::to_string(c.objects[k]);
    s += "|";
    for (std::size_t k = 0; k < c.attributes.size(); ++k)
      s += (k ? "," : "") + std::to_string(c.attributes[k]);
    labels[i] = s + ")";
  }
  out.lattice = lattice_from_leq(m, leq, labels);
  return out;
}

}  // namespace latnet
