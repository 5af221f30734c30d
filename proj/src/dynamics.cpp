#include "latnet/dynamics.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <set>

#include "latnet/enumerate.hpp"
#include "latnet/errors.hpp"
#include "latnet/rng.hpp"

namespace latnet {

using detail::fill_flags;
using detail::kMaxEnumeration;
using detail::kMaxEnumRadix;
using detail::msb_strides;

namespace {

void check_state(const TarskiSheaf& s, const std::vector<int>& x, const char* what) {
  if (static_cast<int>(x.size()) != s.g.n)
    throw ShapeMismatch(std::string(what) + " has " + std::to_string(x.size()) +
                        " entries, graph has " + std::to_string(s.g.n) + " nodes");
  for (int i = 0; i < s.g.n; ++i)
    if (x[i] < 0 || x[i] >= s.F(i).m)
      throw ShapeMismatch(std::string(what) + " entry out of range at node " + std::to_string(i));
}

void check_edge_state(const TarskiSheaf& s, const std::vector<int>& y, const char* what) {
  const int ne = static_cast<int>(s.g.edges.size());
  if (static_cast<int>(y.size()) != ne)
    throw ShapeMismatch(std::string(what) + " has " + std::to_string(y.size()) +
                        " entries, graph has " + std::to_string(ne) + " edges");
  for (int e = 0; e < ne; ++e)
    if (y[e] < 0 || y[e] >= s.Fe(e).m)
      throw ShapeMismatch(std::string(what) + " entry out of range at edge " + std::to_string(e));
}

// Precomputed per-edge distance evaluator; Hasse tables are shared between
// edges whose stalks are the same lattice object.
struct EnergyEval {
  const TarskiSheaf* s = nullptr;
  std::vector<int> table_of;  // per edge: -1 = mask hamming, else pool index
  std::vector<std::vector<std::int32_t>> pool;  // flat m*m Hasse tables

  double operator()(const Cochain0& x) const {
    double v = 0;
    const int ne = static_cast<int>(s->g.edges.size());
    for (int e = 0; e < ne; ++e) {
      const auto [i, j] = s->g.edges[e];
      const int a = s->down(i, e, x[i]);
      const int b = s->down(j, e, x[j]);
      if (table_of[e] < 0) {
        // mask_elements: indices are subset bitmasks, symmetric difference.
        v += std::popcount(static_cast<std::uint32_t>(a) ^ static_cast<std::uint32_t>(b));
      } else {
        v += pool[table_of[e]][std::size_t(a) * s->Fe(e).m + b];
      }
    }
    return v;
  }
};

EnergyEval make_energy_eval(const TarskiSheaf& s, EdgeMetric metric) {
  EnergyEval ev;
  ev.s = &s;
  const int ne = static_cast<int>(s.g.edges.size());
  ev.table_of.assign(ne, -1);
  std::map<const FiniteLattice*, int> pooled;
  for (int e = 0; e < ne; ++e) {
    const FiniteLattice& L = s.Fe(e);
    const bool has_mask = L.mask_elements;
    if (metric == EdgeMetric::hamming && !has_mask)
      throw MetricUndefined("hamming metric needs subset masks on the stalk of edge " +
                            std::to_string(e));
    const bool use_mask = metric == EdgeMetric::hamming || (metric == EdgeMetric::automatic && has_mask);
    if (use_mask) continue;
    auto [it, fresh] = pooled.emplace(&L, static_cast<int>(ev.pool.size()));
    if (fresh) ev.pool.push_back(hasse_distances(L));
    ev.table_of[e] = it->second;
  }
  return ev;
}

}  // namespace

Cochain0 tarski_laplacian(const TarskiSheaf& s, const Cochain0& x) {
  check_state(s, x, "0-cochain");
  Cochain0 r(s.g.n);
  for (int i = 0; i < s.g.n; ++i) {
    int acc = s.F(i).top;
    for (const auto& [e, j] : s.g.incident[i]) acc = s.F(i).meet_of(acc, s.up(i, e, s.down(j, e, x[j])));
    r[i] = acc;
  }
  return r;
}

Cochain0 tarski_laplacian_restricted(const TarskiSheaf& s, const Cochain0& x,
                                     const std::vector<int>& fired) {
  check_state(s, x, "0-cochain");
  std::vector<char> in(s.g.n, 0);
  for (int j : fired) {
    if (j < 0 || j >= s.g.n) throw ShapeMismatch("fired node " + std::to_string(j) + " out of range");
    in[j] = 1;
  }
  Cochain0 r(s.g.n);
  for (int i = 0; i < s.g.n; ++i) {
    int acc = s.F(i).top;
    for (const auto& [e, j] : s.g.incident[i])
      if (in[j]) acc = s.F(i).meet_of(acc, s.up(i, e, s.down(j, e, x[j])));
    r[i] = acc;
  }
  return r;
}

Cochain0 closure_E(const TarskiSheaf& s, const Cochain0& x) {
  check_state(s, x, "0-cochain");
  Cochain0 r(s.g.n);
  for (int i = 0; i < s.g.n; ++i) {
    int acc = s.F(i).top;
    for (const auto& [e, j] : s.g.incident[i]) {
      (void)j;
      acc = s.F(i).meet_of(acc, s.up(i, e, s.down(i, e, x[i])));
    }
    r[i] = acc;
  }
  return r;
}

double dirichlet_energy(const TarskiSheaf& s, const Cochain0& x, EdgeMetric metric) {
  check_state(s, x, "0-cochain");
  return make_energy_eval(s, metric)(x);
}

HeatFlowResult heat_flow(const TarskiSheaf& s, Cochain0 x0, long long max_steps) {
  check_state(s, x0, "initial state");
  if (max_steps < 0) {
    max_steps = 1;
    for (const auto& L : s.node_stalk) max_steps += lattice_height(*L);
  }
  HeatFlowResult res;
  res.trajectory.push_back(std::move(x0));
  for (long long t = 0; t < max_steps; ++t) {
    const Cochain0& x = res.trajectory.back();
    Cochain0 next = cochain_meet(s, tarski_laplacian(s, x), x);
    if (next == x) {
      res.reached_fixed_point = true;
      return res;
    }
    res.trajectory.push_back(std::move(next));
  }
  // A descending chain cannot outlast the default height bound, so reaching
  // here means a caller-supplied budget was too small.
  return res;
}

// ----- broadcast schedules ----------------------------------------------

BroadcastSequence BroadcastSequence::synchronous() { return {}; }

BroadcastSequence BroadcastSequence::uniform_single(uint64_t seed) {
  BroadcastSequence b;
  b.kind = ScheduleKind::uniform_single;
  b.seed = seed;
  return b;
}

BroadcastSequence BroadcastSequence::periodic(std::vector<std::vector<int>> rounds) {
  if (rounds.empty()) throw ShapeMismatch("periodic schedule needs at least one round");
  BroadcastSequence b;
  b.kind = ScheduleKind::periodic;
  b.rounds = std::move(rounds);
  return b;
}

BroadcastSequence BroadcastSequence::explicit_list(std::vector<std::vector<int>> rounds) {
  BroadcastSequence b;
  b.kind = ScheduleKind::explicit_list;
  b.rounds = std::move(rounds);
  return b;
}

bool BroadcastSequence::is_live(int n) const {
  if (kind == ScheduleKind::synchronous || kind == ScheduleKind::uniform_single) return true;
  std::vector<char> seen(n, 0);
  for (const auto& round : rounds)
    for (int v : round)
      if (v >= 0 && v < n) seen[v] = 1;
  return std::all_of(seen.begin(), seen.end(), [](char c) { return c != 0; });
}

// ----- gossip ------------------------------------------------------------

GossipResult gossip(const TarskiSheaf& s, Cochain0 x0, const BroadcastSequence& schedule,
                    GossipOptions opt) {
  check_state(s, x0, "initial state");
  if (opt.max_steps < 1) throw ShapeMismatch("gossip needs max_steps >= 1");
  for (const auto& round : schedule.rounds)
    for (int v : round)
      if (v < 0 || v >= s.g.n)
        throw ShapeMismatch("schedule names node " + std::to_string(v) + " outside the graph");

  const int n = s.g.n;
  std::vector<int> everyone(n);
  for (int i = 0; i < n; ++i) everyone[i] = i;

  std::optional<EnergyEval> energy;
  if (opt.track_energy) energy.emplace(make_energy_eval(s, opt.metric));

  GossipResult res;
  Cochain0 x = std::move(x0);
  res.trace.push_back({0, {}, energy ? std::optional<double>((*energy)(x)) : std::nullopt, x});

  SplitMix64 rng{schedule.seed};
  size_t pos = 0;
  std::vector<char> fired_since_change(n, 0);
  int fired_count = 0;

  for (long long t = 1;; ++t) {
    if (fired_count == n) {
      // Every node has broadcast its current value and nothing moved: by
      // adjointness both restriction images agree on every edge, so x is a
      // section and a fixed point.
      res.converged = true;
      break;
    }
    if (t - 1 >= opt.max_steps) break;

    std::vector<int> tau;
    bool record_fired = true;
    bool exhausted = false;
    switch (schedule.kind) {
      case ScheduleKind::synchronous:
        tau = everyone;
        record_fired = false;  // the fired column stays empty for synchronous rounds
        break;
      case ScheduleKind::uniform_single:
        tau = {static_cast<int>(rng.below(static_cast<uint64_t>(n)))};
        break;
      case ScheduleKind::periodic:
        tau = schedule.rounds[pos % schedule.rounds.size()];
        ++pos;
        break;
      case ScheduleKind::explicit_list:
        if (pos >= schedule.rounds.size())
          exhausted = true;  // schedule ran out before quiescence
        else
          tau = schedule.rounds[pos++];
        break;
    }
    if (exhausted) break;

    Cochain0 next = cochain_meet(s, tarski_laplacian_restricted(s, x, tau), x);
    const bool changed = next != x;
    x = std::move(next);
    res.trace.push_back({t, record_fired ? tau : std::vector<int>{},
                         energy ? std::optional<double>((*energy)(x)) : std::nullopt, x});
    if (changed) {
      std::fill(fired_since_change.begin(), fired_since_change.end(), 0);
      fired_count = 0;
    } else {
      for (int j : tau)
        if (!fired_since_change[j]) {
          fired_since_change[j] = 1;
          ++fired_count;
        }
    }
  }
  return res;
}

// ----- consensus ---------------------------------------------------------

namespace {

ConsensusResult consensus_run(const Graph& g, const LatticePtr& L, std::vector<int> x0, bool use_meet) {
  if (!L) throw ShapeMismatch("null lattice");
  if (static_cast<int>(x0.size()) != g.n) throw ShapeMismatch("need one value per node");
  for (int v : x0)
    if (v < 0 || v >= L->m) throw ShapeMismatch("consensus value out of range");

  ConsensusResult res;
  res.x = std::move(x0);
  // diam(G) rounds suffice on connected graphs; n+1 is a safe ceiling for
  // any input (per-component diameters are < n).
  for (int round = 0; round <= g.n; ++round) {
    std::vector<int> next(g.n);
    for (int i = 0; i < g.n; ++i) {
      int acc = res.x[i];
      for (int j : g.nbrs[i])
        acc = use_meet ? L->meet_of(acc, res.x[j]) : L->join_of(acc, res.x[j]);
      next[i] = acc;
    }
    if (next == res.x) return res;
    res.x = std::move(next);
    res.rounds = round + 1;
  }
  throw NotConverged("consensus did not stabilize within the node-count ceiling");
}

}  // namespace

ConsensusResult meet_consensus(const Graph& g, const LatticePtr& L, std::vector<int> x0) {
  return consensus_run(g, L, std::move(x0), true);
}

ConsensusResult join_consensus(const Graph& g, const LatticePtr& L, std::vector<int> x0) {
  return consensus_run(g, L, std::move(x0), false);
}

// ----- Helmholtzian ------------------------------------------------------

Cochain1 helmholtzian(const TarskiSheaf& s, const Cochain1& y) {
  check_edge_state(s, y, "1-cochain");
  const int ne = static_cast<int>(s.g.edges.size());
  Cochain1 r(ne);
  for (int e = 0; e < ne; ++e) {
    const auto [i, j] = s.g.edges[e];
    int acc = s.Fe(e).bot;
    for (const auto& [e2, other] : s.g.incident[i]) {
      (void)other;
      if (e2 != e) acc = s.Fe(e).join_of(acc, s.down(i, e, s.up(i, e2, y[e2])));
    }
    for (const auto& [e2, other] : s.g.incident[j]) {
      (void)other;
      if (e2 != e) acc = s.Fe(e).join_of(acc, s.down(j, e, s.up(j, e2, y[e2])));
    }
    r[e] = acc;
  }
  return r;
}

ConjectureReport conjecture_report(const TarskiSheaf& s, Exec mode) {
  const long long total = cochain1_count(s);
  if (total > kMaxEnumeration)
    throw TooLarge("1-cochain space has " + std::to_string(total) + " points (limit " +
                   std::to_string(kMaxEnumeration) + ")");
  const int ne = static_cast<int>(s.g.edges.size());
  if (ne > kMaxEnumRadix) throw TooLarge("enumeration supports at most 64 edges");
  const int n = s.g.n;
  const std::vector<long long> stride = msb_strides(s.edge_stalk);

  // bit 0: componentwise prefix point of the Helmholtzian; bit 1: member of
  // the coequalizer set (both coboundary adjoints agree).
  auto flags = fill_flags(total, mode, [&](long long idx) -> uint8_t {
    std::array<int, kMaxEnumRadix> y{};
    for (int e = 0; e < ne; ++e) y[e] = static_cast<int>((idx / stride[e]) % s.Fe(e).m);

    uint8_t bits = 1;
    for (int e = 0; e < ne && bits; ++e) {
      const auto [i, j] = s.g.edges[e];
      int acc = s.Fe(e).bot;
      for (const auto& [e2, other] : s.g.incident[i]) {
        (void)other;
        if (e2 != e) acc = s.Fe(e).join_of(acc, s.down(i, e, s.up(i, e2, y[e2])));
      }
      for (const auto& [e2, other] : s.g.incident[j]) {
        (void)other;
        if (e2 != e) acc = s.Fe(e).join_of(acc, s.down(j, e, s.up(j, e2, y[e2])));
      }
      if (!s.Fe(e).le(acc, y[e])) bits = 0;
    }

    uint8_t h1 = 2;
    for (int i = 0; i < n && h1; ++i) {
      int lo = s.F(i).top, hi = s.F(i).top;
      for (const auto& [e, other] : s.g.incident[i]) {
        (void)other;
        const int lifted = s.up(i, e, y[e]);
        if (s.g.minus_end(e) == i)
          lo = s.F(i).meet_of(lo, lifted);
        else
          hi = s.F(i).meet_of(hi, lifted);
      }
      if (lo != hi) h1 = 0;
    }
    return bits | h1;
  });

  ConjectureReport rep;
  rep.cochain_count = total;
  auto decode = [&](long long idx) {
    Cochain1 y(ne);
    for (int e = 0; e < ne; ++e) y[e] = static_cast<int>((idx / stride[e]) % s.Fe(e).m);
    return y;
  };
  for (long long idx = 0; idx < total; ++idx) {
    const uint8_t b = flags[static_cast<size_t>(idx)];
    if (b & 1) ++rep.prefix_count;
    if (b & 2) ++rep.h1_count;
    if ((b & 1) && !(b & 2) && rep.prefix_not_h1.size() < 8) rep.prefix_not_h1.push_back(decode(idx));
    if ((b & 2) && !(b & 1) && rep.h1_not_prefix.size() < 8) rep.h1_not_prefix.push_back(decode(idx));
  }
  rep.equal = rep.prefix_not_h1.empty() && rep.h1_not_prefix.empty() &&
              rep.prefix_count == rep.h1_count;
  return rep;
}

// ----- Hodge-Tarski check ------------------------------------------------

HodgeCheck check_hodge_tarski(const TarskiSheaf& s, Exec mode) {
  const long long total = cochain0_count(s);
  if (total > kMaxEnumeration)
    throw TooLarge("0-cochain space has " + std::to_string(total) + " points (limit " +
                   std::to_string(kMaxEnumeration) + ")");
  if (s.g.n > kMaxEnumRadix) throw TooLarge("enumeration supports at most 64 nodes");

  const int n = s.g.n;
  const int ne = static_cast<int>(s.g.edges.size());
  const std::vector<long long> stride = msb_strides(s.node_stalk);

  // bit 0: section; bit 1: suffix point (x <= Lx); bit 2: fixed point of
  // L meet id.
  auto flags = fill_flags(total, mode, [&](long long idx) -> uint8_t {
    std::array<int, kMaxEnumRadix> x{}, lx{};
    for (int i = 0; i < n; ++i) x[i] = static_cast<int>((idx / stride[i]) % s.F(i).m);
    for (int i = 0; i < n; ++i) {
      int acc = s.F(i).top;
      for (const auto& [e, j] : s.g.incident[i])
        acc = s.F(i).meet_of(acc, s.up(i, e, s.down(j, e, x[j])));
      lx[i] = acc;
    }
    uint8_t bits = 0b111;
    for (int e = 0; e < ne; ++e) {
      const auto [i, j] = s.g.edges[e];
      if (s.down(i, e, x[i]) != s.down(j, e, x[j])) {
        bits &= ~uint8_t(1);
        break;
      }
    }
    for (int i = 0; i < n; ++i) {
      if (!s.F(i).le(x[i], lx[i])) bits &= ~uint8_t(2);
      if (s.F(i).meet_of(lx[i], x[i]) != x[i]) bits &= ~uint8_t(4);
    }
    return bits;
  });

  HodgeCheck res;
  res.ok = true;
  for (long long idx = 0; idx < total; ++idx) {
    const uint8_t b = flags[static_cast<size_t>(idx)];
    if (b & 1) ++res.section_count;
    if (b & 2) ++res.suffix_count;
    if (b & 4) ++res.fixed_count;
    if (b != 0 && b != 0b111 && !res.witness) {
      res.ok = false;
      Cochain0 x(n);
      for (int i = 0; i < n; ++i) x[i] = static_cast<int>((idx / stride[i]) % s.F(i).m);
      res.witness = std::move(x);
    }
  }
  return res;
}

}  // namespace latnet
