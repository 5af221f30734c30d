#include "latnet/lattice.hpp"

#include <algorithm>
#include <cstring>
#include <map>
#include <numeric>
#include <queue>
#include <unordered_map>

namespace latnet {
namespace {

std::string default_label(int i) { return "e" + std::to_string(i); }

std::vector<std::string> fill_labels(int m, std::vector<std::string> labels) {
  if (labels.empty()) {
    labels.reserve(m);
    for (int i = 0; i < m; ++i) labels.push_back(default_label(i));
  }
  if (int(labels.size()) != m)
    throw ShapeMismatch("labels: expected " + std::to_string(m) + " entries, got " +
                        std::to_string(labels.size()));
  return labels;
}

// Packed bit matrix, one row per element; used for the set computations in
// validation (downsets, upsets, cover detection).
struct BitRows {
  int n = 0, words = 0;
  std::vector<std::uint64_t> bits;
  explicit BitRows(int n) : n(n), words((n + 63) / 64), bits(std::size_t(n) * words, 0) {}
  void set(int r, int c) { bits[std::size_t(r) * words + c / 64] |= 1ull << (c % 64); }
  const std::uint64_t* row(int r) const { return bits.data() + std::size_t(r) * words; }
  bool subset(int a, int b) const {  // row a ⊆ row b
    const std::uint64_t *ra = row(a), *rb = row(b);
    for (int w = 0; w < words; ++w)
      if (ra[w] & ~rb[w]) return false;
    return true;
  }
};

struct RowHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (std::uint64_t w : v) {
      h ^= w;
      h *= 0x100000001b3ULL;
    }
    return std::size_t(h);
  }
};

void check_partial_order(int m, const std::vector<std::uint8_t>& leq,
                         const std::vector<std::string>& labels) {
  for (int a = 0; a < m; ++a)
    if (!leq[std::size_t(a) * m + a])
      throw NotPartialOrder("not reflexive at " + labels[a]);
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      if (leq[std::size_t(a) * m + b] && leq[std::size_t(b) * m + a])
        throw NotPartialOrder("not antisymmetric at (" + labels[a] + ", " + labels[b] + ")");
  BitRows up(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (leq[std::size_t(a) * m + b]) up.set(a, b);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && leq[std::size_t(a) * m + b] && !up.subset(b, a))
        throw NotPartialOrder("not transitive through (" + labels[a] + ", " + labels[b] + ")");
}

}  // namespace

LatticePtr lattice_from_leq(int m, const std::vector<std::uint8_t>& leq,
                            std::vector<std::string> labels) {
  if (m <= 0) throw NotALattice("a lattice needs at least one element");
  if (m > kMaxLatticeSize)
    throw TooLarge("lattice size " + std::to_string(m) + " exceeds table guard " +
                   std::to_string(kMaxLatticeSize));
  if (int(leq.size()) != m * m)
    throw ShapeMismatch("leq table: expected " + std::to_string(m * m) + " entries");
  auto names = fill_labels(m, std::move(labels));
  check_partial_order(m, leq, names);

  auto L = std::make_shared<FiniteLattice>();
  L->m = m;
  L->leq = leq;
  for (auto& v : L->leq) v = v ? 1 : 0;
  L->labels = names;

  BitRows down(m), up(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (L->leq[std::size_t(a) * m + b]) {
        up.set(a, b);
        down.set(b, a);
      }

  // Bottom / top: the unique elements below resp. above everything.
  for (int a = 0; a < m; ++a) {
    bool is_bot = true, is_top = true;
    for (int b = 0; b < m && (is_bot || is_top); ++b) {
      is_bot = is_bot && L->le(a, b);
      is_top = is_top && L->le(b, a);
    }
    if (is_bot) L->bot = a;
    if (is_top) L->top = a;
  }
  if (L->bot < 0) throw NotALattice("no least element");
  if (L->top < 0) throw NotALattice("no greatest element");

  // An element g is the meet of (a,b) exactly when its downset equals
  // downset(a) ∩ downset(b); index elements by their downsets and look the
  // intersections up. Misses mean some pair has no greatest lower bound.
  std::unordered_map<std::vector<std::uint64_t>, int, RowHash> by_down, by_up;
  by_down.reserve(m * 2);
  by_up.reserve(m * 2);
  const int words = down.words;
  std::vector<std::uint64_t> key(words);
  for (int a = 0; a < m; ++a) {
    key.assign(down.row(a), down.row(a) + words);
    by_down.emplace(key, a);
    key.assign(up.row(a), up.row(a) + words);
    by_up.emplace(key, a);
  }
  L->meet.assign(std::size_t(m) * m, 0);
  L->join.assign(std::size_t(m) * m, 0);
  for (int a = 0; a < m; ++a)
    for (int b = a; b < m; ++b) {
      for (int w = 0; w < words; ++w) key[w] = down.row(a)[w] & down.row(b)[w];
      auto it = by_down.find(key);
      if (it == by_down.end())
        throw NotALattice("pair (" + names[a] + ", " + names[b] + ") has no meet");
      L->meet[std::size_t(a) * m + b] = L->meet[std::size_t(b) * m + a] = it->second;
      for (int w = 0; w < words; ++w) key[w] = up.row(a)[w] & up.row(b)[w];
      it = by_up.find(key);
      if (it == by_up.end())
        throw NotALattice("pair (" + names[a] + ", " + names[b] + ") has no join");
      L->join[std::size_t(a) * m + b] = L->join[std::size_t(b) * m + a] = it->second;
    }
  return L;
}

LatticePtr chain_lattice(int n) {
  if (n <= 0) throw NotALattice("a chain needs at least one element");
  if (n > kMaxLatticeSize) throw TooLarge("chain size exceeds table guard");
  auto L = std::make_shared<FiniteLattice>();
  L->m = n;
  L->bot = 0;
  L->top = n - 1;
  L->kind = LatticeKind::chain;
  L->leq.assign(std::size_t(n) * n, 0);
  L->meet.assign(std::size_t(n) * n, 0);
  L->join.assign(std::size_t(n) * n, 0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      L->leq[std::size_t(a) * n + b] = a <= b;
      L->meet[std::size_t(a) * n + b] = std::min(a, b);
      L->join[std::size_t(a) * n + b] = std::max(a, b);
    }
  L->labels = fill_labels(n, {});
  for (int i = 0; i < n; ++i) L->labels[i] = std::to_string(i);
  return L;
}

LatticePtr powerset_lattice(const std::vector<std::string>& ground) {
  const int n = int(ground.size());
  if (n > 12)
    throw TooLarge("powerset ground of " + std::to_string(n) +
                   " elements would need 2^" + std::to_string(n) +
                   " x 2^" + std::to_string(n) + " tables; limit is 12");
  const int m = 1 << n;
  auto L = std::make_shared<FiniteLattice>();
  L->m = m;
  L->bot = 0;
  L->top = m - 1;
  L->kind = LatticeKind::powerset;
  L->mask_elements = true;
  L->ground = ground;
  L->leq.assign(std::size_t(m) * m, 0);
  L->meet.assign(std::size_t(m) * m, 0);
  L->join.assign(std::size_t(m) * m, 0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      L->leq[std::size_t(a) * m + b] = (a & b) == a;
      L->meet[std::size_t(a) * m + b] = a & b;
      L->join[std::size_t(a) * m + b] = a | b;
    }
  L->labels.resize(m);
  for (int a = 0; a < m; ++a) {
    std::string s = "{";
    for (int k = 0; k < n; ++k)
      if (a >> k & 1) {
        if (s.size() > 1) s += ",";
        s += ground[k];
      }
    s += "}";
    L->labels[a] = s;
  }
  return L;
}

LatticePtr powerset_lattice(int n_ground) {
  std::vector<std::string> ground;
  for (int i = 0; i < n_ground; ++i) ground.push_back(std::to_string(i));
  return powerset_lattice(ground);
}

namespace {

// Restricted-growth strings canonically enumerate set partitions of {1..n}:
// rgs[i] is the block of element i, blocks numbered by first appearance.
void enumerate_rgs(int n, std::vector<int>& cur, int used,
                   std::vector<std::vector<int>>& out) {
  if (int(cur.size()) == n) {
    out.push_back(cur);
    return;
  }
  for (int b = 0; b <= used; ++b) {
    cur.push_back(b);
    enumerate_rgs(n, cur, std::max(used, b + 1), out);
    cur.pop_back();
  }
}

std::vector<int> canonical_rgs(const std::vector<int>& assignment) {
  std::vector<int> relabel(assignment.size(), -1), out;
  int next = 0;
  out.reserve(assignment.size());
  for (int a : assignment) {
    if (relabel[a] < 0) relabel[a] = next++;
    out.push_back(relabel[a]);
  }
  return out;
}

}  // namespace

LatticePtr partition_lattice(int n) {
  if (n <= 0) throw NotALattice("partition lattice needs a nonempty ground set");
  if (n > 7) throw TooLarge("partition lattice guard: ground set limited to 7 elements");
  std::vector<std::vector<int>> parts;
  {
    std::vector<int> cur;
    enumerate_rgs(n, cur, 0, parts);
  }
  const int m = int(parts.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < m; ++i) index.emplace(parts[i], i);

  auto L = std::make_shared<FiniteLattice>();
  L->m = m;
  L->kind = LatticeKind::partition;
  L->leq.assign(std::size_t(m) * m, 0);
  L->meet.assign(std::size_t(m) * m, 0);
  L->join.assign(std::size_t(m) * m, 0);

  // Refinement order: pi <= sigma iff elements sharing a block in pi also
  // share one in sigma.
  auto refines = [&](const std::vector<int>& pi, const std::vector<int>& sg) {
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (pi[i] == pi[j] && sg[i] != sg[j]) return false;
    return true;
  };
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      L->leq[std::size_t(a) * m + b] = refines(parts[a], parts[b]);

  std::vector<int> uf(n);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      // Meet: coarsest common refinement — blocks are pairwise
      // intersections, i.e. elements grouped by their (block_a, block_b)
      // label pairs.
      std::vector<int> pairlab(n);
      std::map<std::pair<int, int>, int> seen;
      for (int i = 0; i < n; ++i) {
        auto key = std::make_pair(parts[a][i], parts[b][i]);
        pairlab[i] = seen.emplace(key, int(seen.size())).first->second;
      }
      L->meet[std::size_t(a) * m + b] = index.at(canonical_rgs(pairlab));

      // Join: finest common coarsening — union-find over both partitions'
      // same-block constraints.
      std::iota(uf.begin(), uf.end(), 0);
      auto find = [&](int x) {
        while (uf[x] != x) x = uf[x] = uf[uf[x]];
        return x;
      };
      for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
          if (parts[a][i] == parts[a][j] || parts[b][i] == parts[b][j])
            uf[find(i)] = find(j);
      std::vector<int> roots(n);
      for (int i = 0; i < n; ++i) roots[i] = find(i);
      L->join[std::size_t(a) * m + b] = index.at(canonical_rgs(roots));
    }

  for (int a = 0; a < m; ++a) {
    bool is_bot = true, is_top = true;
    for (int b = 0; b < m; ++b) {
      is_bot = is_bot && L->le(a, b);
      is_top = is_top && L->le(b, a);
    }
    if (is_bot) L->bot = a;
    if (is_top) L->top = a;
  }

  L->labels.resize(m);
  for (int i = 0; i < m; ++i) {
    int blocks = *std::max_element(parts[i].begin(), parts[i].end()) + 1;
    std::string s;
    for (int b = 0; b < blocks; ++b) {
      if (b) s += "|";
      for (int e = 0; e < n; ++e)
        if (parts[i][e] == b) s += std::to_string(e + 1);
    }
    L->labels[i] = s;
  }
  return L;
}

LatticePtr product_lattice(std::vector<LatticePtr> factor_lattices) {
  if (factor_lattices.empty()) throw NotALattice("product needs at least one factor");
  long long total = 1;
  for (const auto& f : factor_lattices) {
    total *= f->m;
    if (total > kMaxLatticeSize)
      throw TooLarge("product size exceeds table guard " + std::to_string(kMaxLatticeSize));
  }
  const int m = int(total);
  const int k = int(factor_lattices.size());
  auto L = std::make_shared<FiniteLattice>();
  L->m = m;
  L->kind = LatticeKind::product;
  L->factors = std::move(factor_lattices);
  L->strides.assign(k, 1);
  for (int i = k - 2; i >= 0; --i) L->strides[i] = L->strides[i + 1] * L->factors[i + 1]->m;

  L->leq.assign(std::size_t(m) * m, 0);
  L->meet.assign(std::size_t(m) * m, 0);
  L->join.assign(std::size_t(m) * m, 0);
  std::vector<int> ca(k), cb(k);
  for (int a = 0; a < m; ++a) {
    for (int i = 0, r = a; i < k; ++i) {
      ca[i] = r / L->strides[i];
      r %= L->strides[i];
    }
    for (int b = 0; b < m; ++b) {
      for (int i = 0, r = b; i < k; ++i) {
        cb[i] = r / L->strides[i];
        r %= L->strides[i];
      }
      bool le = true;
      int mt = 0, jn = 0;
      for (int i = 0; i < k; ++i) {
        le = le && L->factors[i]->le(ca[i], cb[i]);
        mt += L->factors[i]->meet_of(ca[i], cb[i]) * L->strides[i];
        jn += L->factors[i]->join_of(ca[i], cb[i]) * L->strides[i];
      }
      L->leq[std::size_t(a) * m + b] = le;
      L->meet[std::size_t(a) * m + b] = mt;
      L->join[std::size_t(a) * m + b] = jn;
    }
  }
  int bot = 0, top = 0;
  for (int i = 0; i < k; ++i) {
    bot += L->factors[i]->bot * L->strides[i];
    top += L->factors[i]->top * L->strides[i];
  }
  L->bot = bot;
  L->top = top;

  L->labels.resize(m);
  for (int a = 0; a < m; ++a) {
    std::string s = "(";
    for (int i = 0, r = a; i < k; ++i) {
      if (i) s += ",";
      s += L->factors[i]->label(r / L->strides[i]);
      r %= L->strides[i];
    }
    L->labels[a] = s + ")";
  }
  return L;
}

std::vector<int> product_decode(const FiniteLattice& prod, int x) {
  std::vector<int> out(prod.factors.size());
  for (std::size_t i = 0; i < prod.factors.size(); ++i) {
    out[i] = x / prod.strides[i];
    x %= prod.strides[i];
  }
  return out;
}

int product_encode(const FiniteLattice& prod, const std::vector<int>& comps) {
  if (comps.size() != prod.factors.size())
    throw ShapeMismatch("product component count mismatch");
  int x = 0;
  for (std::size_t i = 0; i < comps.size(); ++i) x += comps[i] * prod.strides[i];
  return x;
}

LatticePtr opposite_lattice(const LatticePtr& base) {
  const auto& B = *base;
  auto L = std::make_shared<FiniteLattice>();
  L->m = B.m;
  L->bot = B.top;
  L->top = B.bot;
  L->kind = B.kind;
  L->mask_elements = B.mask_elements;
  L->labels = B.labels;
  L->ground = B.ground;
  L->leq.assign(std::size_t(B.m) * B.m, 0);
  for (int a = 0; a < B.m; ++a)
    for (int b = 0; b < B.m; ++b)
      L->leq[std::size_t(a) * B.m + b] = B.le(b, a);
  L->meet = B.join;
  L->join = B.meet;
  return L;
}

bool lattice_same(const FiniteLattice& a, const FiniteLattice& b) {
  if (&a == &b) return true;
  return a.m == b.m && a.bot == b.bot && a.top == b.top && a.leq == b.leq &&
         a.meet == b.meet && a.join == b.join;
}

void check_lattice_laws(const FiniteLattice& L) {
  const int m = L.m;
  if (m <= 0) throw NotALattice("empty carrier");
  if (m > 512) throw TooLarge("law audit guard: associativity scan limited to 512 elements");
  check_partial_order(m, L.leq, L.labels);
  auto name = [&](int x) { return L.label(x); };
  for (int a = 0; a < m; ++a) {
    if (!L.le(L.bot, a)) throw NotALattice("bot not least at " + name(a));
    if (!L.le(a, L.top)) throw NotALattice("top not greatest at " + name(a));
    if (L.meet_of(a, a) != a || L.join_of(a, a) != a)
      throw NotALattice("idempotence fails at " + name(a));
    if (L.meet_of(a, L.top) != a || L.join_of(a, L.bot) != a)
      throw NotALattice("unit laws fail at " + name(a));
  }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      const int mt = L.meet_of(a, b), jn = L.join_of(a, b);
      if (mt != L.meet_of(b, a) || jn != L.join_of(b, a))
        throw NotALattice("commutativity fails at (" + name(a) + ", " + name(b) + ")");
      // The operation tables must agree with the order: glb and lub bounds.
      if (!L.le(mt, a) || !L.le(mt, b) || !L.le(a, jn) || !L.le(b, jn))
        throw NotALattice("bound fails at (" + name(a) + ", " + name(b) + ")");
      for (int c = 0; c < m; ++c) {
        if (L.le(c, a) && L.le(c, b) && !L.le(c, mt))
          throw NotALattice("meet not greatest lower bound at (" + name(a) + ", " +
                            name(b) + ") vs " + name(c));
        if (L.le(a, c) && L.le(b, c) && !L.le(jn, c))
          throw NotALattice("join not least upper bound at (" + name(a) + ", " + name(b) +
                            ") vs " + name(c));
      }
      // Order/algebra equivalence.
      if (L.le(a, b) != (mt == a) || L.le(a, b) != (jn == b))
        throw NotALattice("order/algebra equivalence fails at (" + name(a) + ", " + name(b) + ")");
      // Absorption.
      if (L.meet_of(a, jn) != a || L.join_of(a, mt) != a)
        throw NotALattice("absorption fails at (" + name(a) + ", " + name(b) + ")");
    }
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      for (int c = 0; c < m; ++c) {
        if (L.meet_of(L.meet_of(a, b), c) != L.meet_of(a, L.meet_of(b, c)))
          throw NotALattice("meet associativity fails");
        if (L.join_of(L.join_of(a, b), c) != L.join_of(a, L.join_of(b, c)))
          throw NotALattice("join associativity fails");
      }
}

std::vector<int> join_irreducibles(const FiniteLattice& L) {
  std::vector<int> out;
  for (int x = 0; x < L.m; ++x) {
    int acc = L.bot;
    for (int y = 0; y < L.m; ++y)
      if (L.lt(y, x)) acc = L.join_of(acc, y);
    if (acc != x) out.push_back(x);
  }
  return out;
}

std::vector<int> meet_irreducibles(const FiniteLattice& L) {
  std::vector<int> out;
  for (int x = 0; x < L.m; ++x) {
    int acc = L.top;
    for (int y = 0; y < L.m; ++y)
      if (L.lt(x, y)) acc = L.meet_of(acc, y);
    if (acc != x) out.push_back(x);
  }
  return out;
}

bool is_distributive(const FiniteLattice& L) {
  if (L.m > 512) throw TooLarge("distributivity scan limited to 512 elements");
  for (int x = 0; x < L.m; ++x)
    for (int y = 0; y < L.m; ++y)
      for (int z = 0; z < L.m; ++z)
        if (L.meet_of(x, L.join_of(y, z)) !=
            L.join_of(L.meet_of(x, y), L.meet_of(x, z)))
          return false;
  return true;
}

std::vector<std::pair<int, int>> cover_pairs(const FiniteLattice& L) {
  const int m = L.m;
  BitRows up(m), down(m);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (a != b && L.le(a, b)) {
        up.set(a, b);
        down.set(b, a);
      }
  std::vector<std::pair<int, int>> covers;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      if (a == b || !L.le(a, b)) continue;
      bool gap = true;
      const std::uint64_t *ua = up.row(a), *db = down.row(b);
      for (int w = 0; w < up.words && gap; ++w)
        if (ua[w] & db[w]) gap = false;
      if (gap) covers.emplace_back(a, b);
    }
  return covers;
}

std::vector<int> element_heights(const FiniteLattice& L) {
  const int m = L.m;
  // Process in ascending downset size: y < x implies |down(y)| < |down(x)|.
  std::vector<int> below(m, 0), order(m), h(m, 0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b)
      if (L.lt(b, a)) ++below[a];
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return below[a] < below[b]; });
  for (int x : order)
    for (int y = 0; y < m; ++y)
      if (L.lt(y, x)) h[x] = std::max(h[x], h[y] + 1);
  return h;
}

int lattice_height(const FiniteLattice& L) { return element_heights(L)[L.top]; }

RankGrading rank_grading(const FiniteLattice& L) {
  RankGrading g;
  g.rank = element_heights(L);
  g.graded = true;
  for (auto [a, b] : cover_pairs(L))
    if (g.rank[b] != g.rank[a] + 1) {
      g.graded = false;
      break;
    }
  return g;
}

std::vector<int> linear_extension(const FiniteLattice& L) {
  auto h = element_heights(L);
  std::vector<int> order(L.m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return h[a] < h[b]; });
  return order;
}

std::vector<std::int32_t> hasse_distances(const FiniteLattice& L) {
  const int m = L.m;
  std::vector<std::vector<int>> adj(m);
  for (auto [a, b] : cover_pairs(L)) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<std::int32_t> dist(std::size_t(m) * m, -1);
  std::vector<int> queue;
  for (int s = 0; s < m; ++s) {
    auto* row = dist.data() + std::size_t(s) * m;
    queue.assign(1, s);
    row[s] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      int v = queue[head];
      for (int w : adj[v])
        if (row[w] < 0) {
          row[w] = row[v] + 1;
          queue.push_back(w);
        }
    }
  }
  return dist;
}

Poset make_poset(int m, const std::vector<std::uint8_t>& leq,
                 std::vector<std::string> labels) {
  if (m <= 0) throw NotPartialOrder("empty poset");
  if (int(leq.size()) != m * m) throw ShapeMismatch("poset leq table has wrong size");
  Poset p;
  p.m = m;
  p.leq = leq;
  for (auto& v : p.leq) v = v ? 1 : 0;
  p.labels = fill_labels(m, std::move(labels));
  check_partial_order(m, p.leq, p.labels);
  return p;
}

DownsetLattice downset_lattice(const Poset& p) {
  if (p.m > 20) throw TooLarge("downset enumeration limited to posets of 20 elements");
  std::vector<std::uint32_t> downmask(p.m, 0);
  for (int x = 0; x < p.m; ++x)
    for (int y = 0; y < p.m; ++y)
      if (p.le(y, x)) downmask[x] |= 1u << y;

  std::vector<std::uint32_t> sets;
  const std::uint32_t all = p.m == 32 ? ~0u : (1u << p.m) - 1;
  for (std::uint32_t s = 0;; ++s) {
    bool closed = true;
    for (std::uint32_t rest = s; rest && closed; rest &= rest - 1) {
      int x = __builtin_ctz(rest);
      closed = (downmask[x] & ~s) == 0;
    }
    if (closed) {
      sets.push_back(s);
      if (int(sets.size()) > kMaxLatticeSize)
        throw TooLarge("downset lattice exceeds table guard");
    }
    if (s == all) break;
  }

  const int m = int(sets.size());
  std::unordered_map<std::uint32_t, int> index;
  index.reserve(m * 2);
  for (int i = 0; i < m; ++i) index.emplace(sets[i], i);

  auto L = std::make_shared<FiniteLattice>();
  L->m = m;
  L->leq.assign(std::size_t(m) * m, 0);
  L->meet.assign(std::size_t(m) * m, 0);
  L->join.assign(std::size_t(m) * m, 0);
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      L->leq[std::size_t(a) * m + b] = (sets[a] & sets[b]) == sets[a];
      L->meet[std::size_t(a) * m + b] = index.at(sets[a] & sets[b]);
      L->join[std::size_t(a) * m + b] = index.at(sets[a] | sets[b]);
    }
  L->bot = index.at(0);
  L->top = index.at(all);
  L->labels.resize(m);
  for (int i = 0; i < m; ++i) {
    std::string s = "{";
    for (int x = 0; x < p.m; ++x)
      if (sets[i] >> x & 1) {
        if (s.size() > 1) s += ",";
        s += p.labels[x];
      }
    L->labels[i] = s + "}";
  }
  return {L, sets};
}

bool birkhoff_check(const FiniteLattice& L) {
  auto J = join_irreducibles(L);
  const int k = int(J.size());
  if (k > 20) throw TooLarge("join-irreducible subposet too large for downset enumeration");
  std::vector<std::uint8_t> sub(std::size_t(k) * k);
  std::vector<std::string> labels(k);
  for (int i = 0; i < k; ++i) {
    labels[i] = L.label(J[i]);
    for (int j = 0; j < k; ++j) sub[std::size_t(i) * k + j] = L.le(J[i], J[j]);
  }
  DownsetLattice D = k == 0 ? DownsetLattice{chain_lattice(1), {0}}
                            : downset_lattice(make_poset(k, sub, labels));
  if (D.lattice->m != L.m) return false;

  std::unordered_map<std::uint32_t, int> index;
  for (int i = 0; i < D.lattice->m; ++i) index.emplace(D.downsets[i], i);
  std::vector<int> phi(L.m);
  std::vector<char> hit(L.m, 0);
  for (int x = 0; x < L.m; ++x) {
    std::uint32_t mask = 0;
    for (int i = 0; i < k; ++i)
      if (L.le(J[i], x)) mask |= 1u << i;
    auto it = index.find(mask);
    if (it == index.end()) return false;
    phi[x] = it->second;
    if (hit[it->second]) return false;  // not injective
    hit[it->second] = 1;
  }
  for (int a = 0; a < L.m; ++a)
    for (int b = 0; b < L.m; ++b)
      if (L.le(a, b) != D.lattice->le(phi[a], phi[b])) return false;
  return true;
}

MonotoneMap make_monotone(LatticePtr dom, LatticePtr cod,
                          std::vector<std::int32_t> tbl) {
  if (!dom || !cod) throw ShapeMismatch("monotone map needs both lattices");
  if (int(tbl.size()) != dom->m)
    throw ShapeMismatch("image table: expected " + std::to_string(dom->m) + " entries, got " +
                        std::to_string(tbl.size()));
  for (int x = 0; x < dom->m; ++x)
    if (tbl[x] < 0 || tbl[x] >= cod->m)
      throw ShapeMismatch("image of " + dom->label(x) + " outside codomain");
  for (int a = 0; a < dom->m; ++a)
    for (int b = 0; b < dom->m; ++b)
      if (dom->le(a, b) && !cod->le(tbl[a], tbl[b]))
        throw NotMonotone("order not preserved on (" + dom->label(a) + ", " +
                          dom->label(b) + ")");
  return MonotoneMap{std::move(dom), std::move(cod), std::move(tbl)};
}

MonotoneMap identity_map(LatticePtr L) {
  std::vector<std::int32_t> tbl(L->m);
  std::iota(tbl.begin(), tbl.end(), 0);
  auto cod = L;
  return MonotoneMap{std::move(L), std::move(cod), std::move(tbl)};
}

MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f) {
  if (!lattice_same(*f.cod, *g.dom))
    throw ShapeMismatch("compose: inner codomain differs from outer domain");
  std::vector<std::int32_t> tbl(f.dom->m);
  for (int x = 0; x < f.dom->m; ++x) tbl[x] = g.tbl[f.tbl[x]];
  return MonotoneMap{f.dom, g.cod, std::move(tbl)};
}

bool maps_equal(const MonotoneMap& f, const MonotoneMap& g) {
  return lattice_same(*f.dom, *g.dom) && lattice_same(*f.cod, *g.cod) && f.tbl == g.tbl;
}

FixedPointSets fixed_point_sets(const MonotoneMap& f) {
  if (!lattice_same(*f.dom, *f.cod))
    throw ShapeMismatch("fixed points need an endomap");
  const auto& L = *f.dom;
  FixedPointSets out;
  for (int x = 0; x < L.m; ++x) {
    const int fx = f(x);
    if (L.le(fx, x)) out.prefix.push_back(x);
    if (L.le(x, fx)) out.suffix.push_back(x);
    if (fx == x) out.fixed.push_back(x);
  }
  int x = L.bot;
  while (f(x) != x) x = f(x);  // ascends from bot to the least fixed point
  out.least_fixed = x;
  x = L.top;
  while (f(x) != x) x = f(x);  // descends from top to the greatest
  out.greatest_fixed = x;
  return out;
}

}  // namespace latnet
