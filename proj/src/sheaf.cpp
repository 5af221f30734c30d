#include "latnet/sheaf.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "latnet/enumerate.hpp"
#include "latnet/errors.hpp"

namespace latnet {

using detail::checked_product;
using detail::fill_flags;
using detail::kMaxEnumeration;
using detail::kMaxEnumRadix;
using detail::msb_strides;

namespace {

void check_cochain0(const TarskiSheaf& s, const Cochain0& x) {
  if (static_cast<int>(x.size()) != s.g.n)
    throw ShapeMismatch("0-cochain has " + std::to_string(x.size()) + " entries, graph has " +
                        std::to_string(s.g.n) + " nodes");
  for (int i = 0; i < s.g.n; ++i)
    if (x[i] < 0 || x[i] >= s.F(i).m)
      throw ShapeMismatch("0-cochain entry out of range at node " + std::to_string(i));
}

void check_cochain1(const TarskiSheaf& s, const Cochain1& y) {
  const int ne = static_cast<int>(s.g.edges.size());
  if (static_cast<int>(y.size()) != ne)
    throw ShapeMismatch("1-cochain has " + std::to_string(y.size()) + " entries, graph has " +
                        std::to_string(ne) + " edges");
  for (int e = 0; e < ne; ++e)
    if (y[e] < 0 || y[e] >= s.Fe(e).m)
      throw ShapeMismatch("1-cochain entry out of range at edge " + std::to_string(e));
}

}  // namespace

TarskiSheaf make_sheaf(Graph g, std::vector<LatticePtr> node_stalks,
                       std::vector<LatticePtr> edge_stalks,
                       std::vector<std::array<GaloisConnection, 2>> restrictions) {
  const int ne = static_cast<int>(g.edges.size());
  if (static_cast<int>(node_stalks.size()) != g.n)
    throw ShapeMismatch("need one node stalk per node");
  if (static_cast<int>(edge_stalks.size()) != ne)
    throw ShapeMismatch("need one edge stalk per edge");
  if (static_cast<int>(restrictions.size()) != ne)
    throw ShapeMismatch("need one restriction pair per edge");
  for (const auto& L : node_stalks)
    if (!L) throw ShapeMismatch("null node stalk");
  for (const auto& L : edge_stalks)
    if (!L) throw ShapeMismatch("null edge stalk");

  for (int e = 0; e < ne; ++e) {
    const auto [i, j] = g.edges[e];
    for (int side = 0; side < 2; ++side) {
      const int node = side == 0 ? i : j;
      const GaloisConnection& c = restrictions[e][side];
      std::ostringstream where;
      where << "edge (" << i << "," << j << ") " << (side == 0 ? "minus" : "plus") << " side";
      if (!lattice_same(c.dom(), *node_stalks[node]))
        throw ShapeMismatch(where.str() + ": restriction domain differs from the node stalk");
      if (!lattice_same(c.cod(), *edge_stalks[e]))
        throw ShapeMismatch(where.str() + ": restriction codomain differs from the edge stalk");
      AdjunctionWitness w = validate_connection(c);
      if (!w.ok)
        throw InvalidConnection(where.str() + ": adjunction fails at x=" + std::to_string(w.x) +
                                ", y=" + std::to_string(w.y));
    }
  }
  return TarskiSheaf{std::move(g), std::move(node_stalks), std::move(edge_stalks),
                     std::move(restrictions)};
}

TarskiSheaf constant_sheaf(Graph g, const LatticePtr& L) {
  const int ne = static_cast<int>(g.edges.size());
  std::vector<LatticePtr> nodes(g.n, L), edges(ne, L);
  GaloisConnection id = identity_connection(L);
  std::vector<std::array<GaloisConnection, 2>> restr(ne, {id, id});
  return make_sheaf(std::move(g), std::move(nodes), std::move(edges), std::move(restr));
}

bool cochain_le(const TarskiSheaf& s, const Cochain0& a, const Cochain0& b) {
  check_cochain0(s, a);
  check_cochain0(s, b);
  for (int i = 0; i < s.g.n; ++i)
    if (!s.F(i).le(a[i], b[i])) return false;
  return true;
}

Cochain0 cochain_meet(const TarskiSheaf& s, const Cochain0& a, const Cochain0& b) {
  check_cochain0(s, a);
  check_cochain0(s, b);
  Cochain0 r(s.g.n);
  for (int i = 0; i < s.g.n; ++i) r[i] = s.F(i).meet_of(a[i], b[i]);
  return r;
}

Cochain0 cochain_join(const TarskiSheaf& s, const Cochain0& a, const Cochain0& b) {
  check_cochain0(s, a);
  check_cochain0(s, b);
  Cochain0 r(s.g.n);
  for (int i = 0; i < s.g.n; ++i) r[i] = s.F(i).join_of(a[i], b[i]);
  return r;
}

Cochain0 top_cochain(const TarskiSheaf& s) {
  Cochain0 r(s.g.n);
  for (int i = 0; i < s.g.n; ++i) r[i] = s.F(i).top;
  return r;
}

Cochain0 bottom_cochain(const TarskiSheaf& s) {
  Cochain0 r(s.g.n);
  for (int i = 0; i < s.g.n; ++i) r[i] = s.F(i).bot;
  return r;
}

bool is_section(const TarskiSheaf& s, const Cochain0& x) {
  check_cochain0(s, x);
  const int ne = static_cast<int>(s.g.edges.size());
  for (int e = 0; e < ne; ++e) {
    const auto [i, j] = s.g.edges[e];
    if (s.down(i, e, x[i]) != s.down(j, e, x[j])) return false;
  }
  return true;
}

Cochain1 delta_minus(const TarskiSheaf& s, const Cochain0& x) {
  check_cochain0(s, x);
  const int ne = static_cast<int>(s.g.edges.size());
  Cochain1 y(ne);
  for (int e = 0; e < ne; ++e) y[e] = s.down(s.g.minus_end(e), e, x[s.g.minus_end(e)]);
  return y;
}

Cochain1 delta_plus(const TarskiSheaf& s, const Cochain0& x) {
  check_cochain0(s, x);
  const int ne = static_cast<int>(s.g.edges.size());
  Cochain1 y(ne);
  for (int e = 0; e < ne; ++e) y[e] = s.down(s.g.plus_end(e), e, x[s.g.plus_end(e)]);
  return y;
}

Cochain0 delta_minus_upper(const TarskiSheaf& s, const Cochain1& y) {
  check_cochain1(s, y);
  Cochain0 x(s.g.n);
  for (int i = 0; i < s.g.n; ++i) {
    int acc = s.F(i).top;
    for (const auto& [e, other] : s.g.incident[i]) {
      (void)other;
      if (s.g.minus_end(e) == i) acc = s.F(i).meet_of(acc, s.up(i, e, y[e]));
    }
    x[i] = acc;
  }
  return x;
}

Cochain0 delta_plus_upper(const TarskiSheaf& s, const Cochain1& y) {
  check_cochain1(s, y);
  Cochain0 x(s.g.n);
  for (int i = 0; i < s.g.n; ++i) {
    int acc = s.F(i).top;
    for (const auto& [e, other] : s.g.incident[i]) {
      (void)other;
      if (s.g.plus_end(e) == i) acc = s.F(i).meet_of(acc, s.up(i, e, y[e]));
    }
    x[i] = acc;
  }
  return x;
}

long long cochain0_count(const TarskiSheaf& s) { return checked_product(s.node_stalk); }
long long cochain1_count(const TarskiSheaf& s) { return checked_product(s.edge_stalk); }

std::vector<Cochain0> sections_bruteforce(const TarskiSheaf& s, Exec mode) {
  const long long total = cochain0_count(s);
  if (total > kMaxEnumeration)
    throw TooLarge("0-cochain space has " + std::to_string(total) + " points (limit " +
                   std::to_string(kMaxEnumeration) + ")");
  if (s.g.n > kMaxEnumRadix) throw TooLarge("enumeration supports at most 64 nodes");

  const int n = s.g.n;
  const int ne = static_cast<int>(s.g.edges.size());
  const std::vector<long long> stride = msb_strides(s.node_stalk);

  auto flags = fill_flags(total, mode, [&](long long idx) {
    std::array<int, kMaxEnumRadix> x{};
    for (int i = 0; i < n; ++i) x[i] = static_cast<int>((idx / stride[i]) % s.F(i).m);
    for (int e = 0; e < ne; ++e) {
      const auto [i, j] = s.g.edges[e];
      if (s.down(i, e, x[i]) != s.down(j, e, x[j])) return false;
    }
    return true;
  });

  std::vector<Cochain0> out;
  for (long long idx = 0; idx < total; ++idx) {
    if (!flags[static_cast<size_t>(idx)]) continue;
    Cochain0 x(n);
    for (int i = 0; i < n; ++i) x[i] = static_cast<int>((idx / stride[i]) % s.F(i).m);
    out.push_back(std::move(x));
  }

  // Structural audit on small results: the bottom cochain always satisfies
  // every edge constraint, and the section set is closed under componentwise
  // join, which is what makes it a complete lattice in its own right.
  if (static_cast<long long>(out.size()) <= 1024) {
    std::set<Cochain0> member(out.begin(), out.end());
    if (!member.count(bottom_cochain(s)))
      throw Error("section audit: bottom cochain missing from the section set");
    for (size_t a = 0; a < out.size(); ++a)
      for (size_t b = a + 1; b < out.size(); ++b)
        if (!member.count(cochain_join(s, out[a], out[b])))
          throw Error("section audit: section set is not closed under joins");
  }
  return out;
}

std::vector<Cochain1> h1_bruteforce(const TarskiSheaf& s, Exec mode) {
  const long long total = cochain1_count(s);
  if (total > kMaxEnumeration)
    throw TooLarge("1-cochain space has " + std::to_string(total) + " points (limit " +
                   std::to_string(kMaxEnumeration) + ")");
  const int ne = static_cast<int>(s.g.edges.size());
  if (ne > kMaxEnumRadix) throw TooLarge("enumeration supports at most 64 edges");

  const int n = s.g.n;
  const std::vector<long long> stride = msb_strides(s.edge_stalk);

  auto flags = fill_flags(total, mode, [&](long long idx) {
    std::array<int, kMaxEnumRadix> y{};
    for (int e = 0; e < ne; ++e) y[e] = static_cast<int>((idx / stride[e]) % s.Fe(e).m);
    for (int i = 0; i < n; ++i) {
      int lo = s.F(i).top, hi = s.F(i).top;
      for (const auto& [e, other] : s.g.incident[i]) {
        (void)other;
        const int lifted = s.up(i, e, y[e]);
        if (s.g.minus_end(e) == i)
          lo = s.F(i).meet_of(lo, lifted);
        else
          hi = s.F(i).meet_of(hi, lifted);
      }
      if (lo != hi) return false;
    }
    return true;
  });

  std::vector<Cochain1> out;
  for (long long idx = 0; idx < total; ++idx) {
    if (!flags[static_cast<size_t>(idx)]) continue;
    Cochain1 y(ne);
    for (int e = 0; e < ne; ++e) y[e] = static_cast<int>((idx / stride[e]) % s.Fe(e).m);
    out.push_back(std::move(y));
  }
  return out;
}

bool h1_le(const TarskiSheaf& s, const Cochain1& a, const Cochain1& b) {
  check_cochain1(s, a);
  check_cochain1(s, b);
  // The quotient invariant carries the opposite of the componentwise order.
  const int ne = static_cast<int>(s.g.edges.size());
  for (int e = 0; e < ne; ++e)
    if (!s.Fe(e).le(b[e], a[e])) return false;
  return true;
}

int transport(const TarskiSheaf& s, const std::vector<int>& path, int x) {
  if (path.empty()) throw NotAPath("empty node path");
  for (int v : path)
    if (v < 0 || v >= s.g.n) throw NotAPath("node " + std::to_string(v) + " out of range");
  if (x < 0 || x >= s.F(path[0]).m)
    throw ShapeMismatch("transport input out of range for the start stalk");
  int cur = x;
  for (size_t k = 0; k + 1 < path.size(); ++k) {
    const int u = path[k], v = path[k + 1];
    const int e = s.g.edge_between(u, v);
    if (e < 0)
      throw NotAPath("no edge between nodes " + std::to_string(u) + " and " + std::to_string(v));
    cur = s.up(v, e, s.down(u, e, cur));
  }
  return cur;
}

MonotoneMap transport_map(const TarskiSheaf& s, const std::vector<int>& path) {
  if (path.empty()) throw NotAPath("empty node path");
  const LatticePtr dom = s.node_stalk[path.front()];
  const LatticePtr cod = s.node_stalk[path.back()];
  std::vector<int> tbl(dom->m);
  for (int x = 0; x < dom->m; ++x) tbl[x] = transport(s, path, x);
  return make_monotone(dom, cod, std::move(tbl));
}

std::vector<MonotoneMap> holonomy(const TarskiSheaf& s, int base, int max_len) {
  if (base < 0 || base >= s.g.n) throw ShapeMismatch("holonomy base node out of range");
  if (max_len < 0 || max_len > 8)
    throw TooLarge("holonomy walk length is capped at 8 (got " + std::to_string(max_len) + ")");

  const LatticePtr L0 = s.node_stalk[base];
  std::vector<int> ident(L0->m);
  std::iota(ident.begin(), ident.end(), 0);

  // Search over (current node, accumulated map) states; a state revisited at
  // a longer walk length cannot contribute anything new.
  using State = std::pair<int, std::vector<int>>;
  std::set<State> visited;
  std::set<std::vector<int>> closed;
  std::vector<State> frontier{{base, ident}};
  visited.insert(frontier.front());
  closed.insert(ident);

  for (int len = 0; len < max_len; ++len) {
    std::vector<State> next;
    for (const auto& [node, tbl] : frontier) {
      for (const auto& [e, other] : s.g.incident[node]) {
        std::vector<int> composed(tbl.size());
        for (size_t t = 0; t < tbl.size(); ++t)
          composed[t] = s.up(other, e, s.down(node, e, tbl[t]));
        State st{other, std::move(composed)};
        if (visited.count(st)) continue;
        if (st.first == base) closed.insert(st.second);
        visited.insert(st);
        next.push_back(std::move(st));
      }
    }
    frontier = std::move(next);
  }

  std::vector<MonotoneMap> out;
  out.reserve(closed.size());
  for (const auto& tbl : closed) out.push_back(make_monotone(L0, L0, std::vector<int>(tbl)));
  return out;
}

}  // namespace latnet
