#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "corpus.hpp"
#include "latnet/dynamics.hpp"

using namespace latnet;

namespace {

// Independent restatement of the heat operator.
Cochain0 laplacian_oracle(const TarskiSheaf& s, const Cochain0& x) {
  Cochain0 out(s.g.n);
  for (int i = 0; i < s.g.n; ++i) {
    int acc = s.F(i).top;
    for (int j : s.g.nbrs[i]) {
      int e = s.g.edge_between(i, j);
      acc = s.F(i).meet_of(acc, s.up(i, e, s.down(j, e, x[j])));
    }
    out[i] = acc;
  }
  return out;
}

// Independent restatement of the edge-space operator.
Cochain1 helmholtzian_oracle(const TarskiSheaf& s, const Cochain1& y) {
  Cochain1 out(s.g.edges.size());
  for (std::size_t e = 0; e < s.g.edges.size(); ++e) {
    auto [i, j] = s.g.edges[e];
    int acc = s.Fe(int(e)).bot;
    for (int end : {i, j})
      for (auto [e2, other] : s.g.incident[end]) {
        (void)other;
        if (e2 == int(e)) continue;
        acc = s.Fe(int(e)).join_of(acc, s.down(end, int(e), s.up(end, e2, y[e2])));
      }
    out[e] = acc;
  }
  return out;
}

// Small explicit sheaf with mixed stalk shapes: chain nodes, powerset edges.
TarskiSheaf mixed_sheaf(SplitMix64& rng) {
  Graph g = Graph::simple(3, {{0, 1}, {1, 2}});
  auto C = chain_lattice(4);
  auto P = powerset_lattice(2);
  std::vector<std::array<GaloisConnection, 2>> restr;
  for (int e = 0; e < 2; ++e)
    restr.push_back({connection_from_lower(corpus::random_join_preserving(C, P, rng)),
                     connection_from_lower(corpus::random_join_preserving(C, P, rng))});
  return make_sheaf(g, {C, C, C}, {P, P}, std::move(restr));
}

}  // namespace

TEST_CASE("the heat operator matches its defining formula and is monotone") {
  SplitMix64 rng(100);
  for (int t = 0; t < 8; ++t) {
    auto rk = corpus::random_kripke_sheaf(2 + int(rng.below(3)), 3, 0.8, 0.3, rng);
    const auto& s = rk.sheaf;
    for (int k = 0; k < 30; ++k) {
      auto x = corpus::random_cochain(s, rng);
      CHECK(tarski_laplacian(s, x) == laplacian_oracle(s, x));
      auto y = cochain_join(s, x, corpus::random_cochain(s, rng));
      CHECK(cochain_le(s, tarski_laplacian(s, x), tarski_laplacian(s, y)));
    }
  }
  // Isolated nodes read top.
  auto L = corpus::m3();
  auto iso = constant_sheaf(Graph::simple(2, {}), L);
  CHECK(tarski_laplacian(iso, {0, 1}) == Cochain0{L->top, L->top});
}

TEST_CASE("suffix points of the heat operator are exactly the global sections") {
  SplitMix64 rng(200);
  for (int t = 0; t < 6; ++t) {
    auto rk = corpus::random_kripke_sheaf(3, 2, 0.7, 0.3, rng);
    const auto& s = rk.sheaf;
    auto hodge = check_hodge_tarski(s);
    CHECK(hodge.ok);
    CHECK(hodge.section_count == hodge.suffix_count);
    CHECK(hodge.section_count == hodge.fixed_count);
    CHECK_FALSE(hodge.witness.has_value());
    CHECK(hodge.section_count == (long long)sections_bruteforce(s).size());
  }
  // The same holds on a non-Kripke sheaf with mixed stalks.
  auto s2 = mixed_sheaf(rng);
  auto h2 = check_hodge_tarski(s2);
  CHECK(h2.ok);
}

TEST_CASE("restricted heat operator: all-fired equals full, none-fired reads top") {
  SplitMix64 rng(7);
  auto rk = corpus::random_kripke_sheaf(4, 2, 0.8, 0.4, rng);
  const auto& s = rk.sheaf;
  std::vector<int> all(s.g.n);
  for (int i = 0; i < s.g.n; ++i) all[i] = i;
  for (int t = 0; t < 20; ++t) {
    auto x = corpus::random_cochain(s, rng);
    CHECK(tarski_laplacian_restricted(s, x, all) == tarski_laplacian(s, x));
    CHECK(tarski_laplacian_restricted(s, x, {}) == top_cochain(s));
    // One fired node j contributes only to its neighbors.
    int j = int(rng.below(uint64_t(s.g.n)));
    auto r = tarski_laplacian_restricted(s, x, {j});
    for (int i = 0; i < s.g.n; ++i) {
      if (!s.g.adjacent(i, j)) {
        CHECK(r[i] == s.F(i).top);
      } else {
        int e = s.g.edge_between(i, j);
        CHECK(r[i] == s.up(i, e, s.down(j, e, x[j])));
      }
    }
  }
}

TEST_CASE("closure_E is a closure operator agreeing with L on sections") {
  SplitMix64 rng(55);
  auto rk = corpus::random_kripke_sheaf(3, 2, 0.85, 0.35, rng);
  const auto& s = rk.sheaf;
  for (int t = 0; t < 25; ++t) {
    auto x = corpus::random_cochain(s, rng);
    auto ex = closure_E(s, x);
    CHECK(cochain_le(s, x, ex));
    CHECK(closure_E(s, ex) == ex);
    auto y = cochain_join(s, x, corpus::random_cochain(s, rng));
    CHECK(cochain_le(s, ex, closure_E(s, y)));
  }
  for (const auto& x : sections_bruteforce(s))
    CHECK(closure_E(s, x) == tarski_laplacian(s, x));
}

TEST_CASE("Dirichlet energy vanishes exactly on sections; metrics agree on masks") {
  SplitMix64 rng(66);
  auto rk = corpus::random_kripke_sheaf(3, 3, 0.8, 0.3, rng);
  const auto& s = rk.sheaf;
  auto secs = sections_bruteforce(s);
  std::set<Cochain0> sset(secs.begin(), secs.end());
  for (int t = 0; t < 60; ++t) {
    auto x = corpus::random_cochain(s, rng);
    double vh = dirichlet_energy(s, x, EdgeMetric::hamming);
    double vg = dirichlet_energy(s, x, EdgeMetric::hasse);
    double va = dirichlet_energy(s, x, EdgeMetric::automatic);
    // Edge stalks are powersets: Hasse distance in the cube is Hamming.
    CHECK(vh == vg);
    CHECK(va == vh);
    CHECK((vh == 0.0) == (sset.count(x) > 0));
  }
  for (const auto& x : secs) CHECK(dirichlet_energy(s, x) == 0.0);
}

TEST_CASE("hamming metric requires mask stalks; hasse always works") {
  SplitMix64 rng(33);
  auto s = mixed_sheaf(rng);  // powerset edges: hamming fine
  auto x = corpus::random_cochain(s, rng);
  CHECK_NOTHROW(dirichlet_energy(s, x, EdgeMetric::hamming));
  // Flip the stalks: chain edges cannot do hamming.
  Graph g = Graph::simple(2, {{0, 1}});
  auto P = powerset_lattice(2);
  auto C = chain_lattice(3);
  std::vector<std::array<GaloisConnection, 2>> restr = {
      {connection_from_lower(corpus::random_join_preserving(P, C, rng)),
       connection_from_lower(corpus::random_join_preserving(P, C, rng))}};
  auto s2 = make_sheaf(g, {P, P}, {C}, std::move(restr));
  auto x2 = corpus::random_cochain(s2, rng);
  CHECK_THROWS_AS(dirichlet_energy(s2, x2, EdgeMetric::hamming), MetricUndefined);
  CHECK_NOTHROW(dirichlet_energy(s2, x2, EdgeMetric::hasse));
  CHECK_NOTHROW(dirichlet_energy(s2, x2, EdgeMetric::automatic));
  // The energy lives in the edge stalk, so chain *node* stalks are fine for
  // hamming as long as the edge stalks carry masks.
  auto s3 = mixed_sheaf(rng);
  CHECK_NOTHROW(dirichlet_energy(s3, corpus::random_cochain(s3, rng), EdgeMetric::hamming));
}

TEST_CASE("heat flow descends strictly to a section within the height bound") {
  SplitMix64 rng(500);
  for (int t = 0; t < 10; ++t) {
    auto rk = corpus::random_kripke_sheaf(2 + int(rng.below(3)), 3, 0.75, 0.3, rng);
    const auto& s = rk.sheaf;
    long long bound = 1;
    for (int i = 0; i < s.g.n; ++i) bound += lattice_height(s.F(i));
    for (int k = 0; k < 10; ++k) {
      auto x0 = corpus::random_cochain(s, rng);
      auto res = heat_flow(s, x0);
      CHECK(res.reached_fixed_point);
      CHECK(res.trajectory.front() == x0);
      CHECK((long long)res.trajectory.size() <= bound);
      for (std::size_t q = 1; q < res.trajectory.size(); ++q) {
        CHECK(cochain_le(s, res.trajectory[q], res.trajectory[q - 1]));
        CHECK(res.trajectory[q] != res.trajectory[q - 1]);
      }
      CHECK(is_section(s, res.final_state()));
      // The fixed point is a fixed point of L meet id.
      auto lx = tarski_laplacian(s, res.final_state());
      CHECK(cochain_meet(s, lx, res.final_state()) == res.final_state());
      // Sections stay put.
      auto again = heat_flow(s, res.final_state());
      CHECK(again.steps() == 0);
    }
  }
}

TEST_CASE("heat flow respects an explicit step budget") {
  SplitMix64 rng(501);
  auto rk = corpus::random_kripke_sheaf(4, 3, 0.6, 0.25, rng);
  const auto& s = rk.sheaf;
  auto x0 = top_cochain(s);
  auto full = heat_flow(s, x0);
  if (full.steps() > 1) {
    auto cut = heat_flow(s, x0, full.steps() - 1);
    CHECK_FALSE(cut.reached_fixed_point);
    CHECK(cut.steps() == full.steps() - 1);
  }
}

TEST_CASE("synchronous gossip reproduces heat flow step for step") {
  SplitMix64 rng(600);
  for (int t = 0; t < 6; ++t) {
    auto rk = corpus::random_kripke_sheaf(3, 3, 0.8, 0.3, rng);
    const auto& s = rk.sheaf;
    auto x0 = corpus::random_cochain(s, rng);
    auto hf = heat_flow(s, x0);
    auto gr = gossip(s, x0, BroadcastSequence::synchronous());
    CHECK(gr.converged);
    REQUIRE(gr.trace.size() >= hf.trajectory.size());
    for (std::size_t q = 0; q < hf.trajectory.size(); ++q)
      CHECK(gr.trace[q].state == hf.trajectory[q]);
    // Rows beyond the heat-flow fixed point (quiescence certification) keep
    // the state constant.
    for (std::size_t q = hf.trajectory.size(); q < gr.trace.size(); ++q)
      CHECK(gr.trace[q].state == hf.final_state());
    CHECK(gr.final_state() == hf.final_state());
    // Synchronous rows carry no fired list.
    for (const auto& row : gr.trace) CHECK(row.fired.empty());
  }
}

TEST_CASE("single-node gossip follows snapshot semantics") {
  SplitMix64 rng(601);
  auto rk = corpus::random_kripke_sheaf(3, 3, 0.8, 0.35, rng);
  const auto& s = rk.sheaf;
  auto x0 = corpus::random_cochain(s, rng);
  auto res = gossip(s, x0, BroadcastSequence::explicit_list({{1}}));
  REQUIRE(res.trace.size() == 2);
  CHECK(res.trace[0].state == x0);
  CHECK(res.trace[1].fired == std::vector<int>{1});
  auto want = cochain_meet(s, tarski_laplacian_restricted(s, x0, {1}), x0);
  CHECK(res.trace[1].state == want);
  CHECK_FALSE(res.converged);  // one round cannot certify quiescence
}

TEST_CASE("uniform single-node gossip converges to a section with zero energy") {
  SplitMix64 rng(602);
  for (uint64_t seed = 1; seed <= 5; ++seed) {
    auto rk = corpus::random_kripke_sheaf(4, 3, 0.8, 0.3, rng);
    const auto& s = rk.sheaf;
    auto x0 = corpus::random_cochain(s, rng);
    auto res = gossip(s, x0, BroadcastSequence::uniform_single(seed));
    CHECK(res.converged);
    CHECK(is_section(s, res.final_state()));
    REQUIRE(res.trace.back().energy.has_value());
    CHECK(*res.trace.back().energy == 0.0);
    // Energy is present on every row and the state descends monotonically.
    for (std::size_t q = 1; q < res.trace.size(); ++q) {
      CHECK(res.trace[q].energy.has_value());
      CHECK(cochain_le(s, res.trace[q].state, res.trace[q - 1].state));
    }
    // Same seed, same trace.
    auto res2 = gossip(s, x0, BroadcastSequence::uniform_single(seed));
    REQUIRE(res.trace.size() == res2.trace.size());
    for (std::size_t q = 0; q < res.trace.size(); ++q) {
      CHECK(res.trace[q].state == res2.trace[q].state);
      CHECK(res.trace[q].fired == res2.trace[q].fired);
    }
  }
}

TEST_CASE("round-robin gossip converges; exhausted explicit schedules do not") {
  SplitMix64 rng(603);
  auto rk = corpus::random_kripke_sheaf(4, 3, 0.8, 0.3, rng);
  const auto& s = rk.sheaf;
  auto x0 = corpus::random_cochain(s, rng);
  std::vector<std::vector<int>> rounds;
  for (int i = 0; i < s.g.n; ++i) rounds.push_back({i});
  auto res = gossip(s, x0, BroadcastSequence::periodic(rounds));
  CHECK(res.converged);
  CHECK(is_section(s, res.final_state()));
  auto res2 = gossip(s, x0, BroadcastSequence::explicit_list({{0}, {1}}));
  CHECK_FALSE(res2.converged);
  // Step budget exhaustion also reports non-convergence.
  GossipOptions opt;
  opt.max_steps = 1;
  auto res3 = gossip(s, top_cochain(s), BroadcastSequence::uniform_single(9), opt);
  if (!is_section(s, top_cochain(s))) CHECK_FALSE(res3.converged);
  // Energy tracking can be disabled.
  GossipOptions noE;
  noE.track_energy = false;
  auto res4 = gossip(s, x0, BroadcastSequence::synchronous(), noE);
  for (const auto& row : res4.trace) CHECK_FALSE(row.energy.has_value());
}

TEST_CASE("broadcast liveness") {
  CHECK(BroadcastSequence::synchronous().is_live(5));
  CHECK(BroadcastSequence::uniform_single(3).is_live(5));
  CHECK(BroadcastSequence::periodic({{0}, {1}, {2}}).is_live(3));
  CHECK_FALSE(BroadcastSequence::periodic({{0}, {1}}).is_live(3));
  CHECK(BroadcastSequence::explicit_list({{0, 1, 2}}).is_live(3));
  CHECK_FALSE(BroadcastSequence::explicit_list({{0}, {1}}).is_live(3));
}

TEST_CASE("meet consensus reaches the global meet within the diameter") {
  // Path of three chain-valued nodes.
  auto g = Graph::simple(3, {{0, 1}, {1, 2}});
  auto L = chain_lattice(4);
  auto res = meet_consensus(g, L, {2, 1, 0});
  CHECK(res.x == std::vector<int>{0, 0, 0});
  CHECK(res.rounds <= diameter(g));
  auto res2 = join_consensus(g, L, {2, 1, 0});
  CHECK(res2.x == std::vector<int>{2, 2, 2});
  CHECK(res2.rounds <= diameter(g));
  // Constant input: zero rounds.
  CHECK(meet_consensus(g, L, {1, 1, 1}).rounds == 0);
  // Randomized sweep.
  SplitMix64 rng(77);
  auto pool = corpus::small_lattices(8);
  for (int t = 0; t < 30; ++t) {
    int n = 2 + int(rng.below(6));
    Graph h = random_connected_graph(n, 0.3, rng);
    auto vals = std::vector<int>(n);
    auto M = pool[rng.below(pool.size())];
    for (auto& v : vals) v = int(rng.below(uint64_t(M->m)));
    int global = M->top;
    for (int v : vals) global = M->meet_of(global, v);
    auto r = meet_consensus(h, M, vals);
    for (int v : r.x) CHECK(v == global);
    CHECK(r.rounds <= std::max(diameter(h), 0));
  }
}

TEST_CASE("the edge-space operator matches its defining formula") {
  SplitMix64 rng(800);
  for (int t = 0; t < 6; ++t) {
    auto rk = corpus::random_kripke_sheaf(3 + int(rng.below(2)), 2, 0.8, 0.4, rng);
    const auto& s = rk.sheaf;
    for (int k = 0; k < 30; ++k) {
      auto y = corpus::random_cochain1(s, rng);
      CHECK(helmholtzian(s, y) == helmholtzian_oracle(s, y));
    }
  }
  // A single isolated edge maps to bot.
  auto s1 = constant_sheaf(Graph::simple(2, {{0, 1}}), corpus::m3());
  CHECK(helmholtzian(s1, {2}) == Cochain1{corpus::m3()->bot});
}

TEST_CASE("the edge-space comparison report is internally consistent") {
  SplitMix64 rng(900);
  auto rk = corpus::random_kripke_sheaf(3, 2, 0.8, 0.35, rng);
  const auto& s = rk.sheaf;
  auto rep = conjecture_report(s);
  CHECK(rep.cochain_count == cochain1_count(s));
  CHECK(rep.prefix_count >= 0);
  CHECK(rep.h1_count == (long long)h1_bruteforce(s).size());
  CHECK(rep.equal == (rep.prefix_not_h1.empty() && rep.h1_not_prefix.empty() &&
                      rep.prefix_count == rep.h1_count));
  // Samples really belong to the claimed side.
  auto in_h1 = [&](const Cochain1& y) {
    return delta_minus_upper(s, y) == delta_plus_upper(s, y);
  };
  auto is_prefix = [&](const Cochain1& y) {
    auto hy = helmholtzian(s, y);
    for (std::size_t e = 0; e < y.size(); ++e)
      if (!s.Fe(int(e)).le(hy[e], y[e])) return false;
    return true;
  };
  for (const auto& y : rep.prefix_not_h1) {
    CHECK(is_prefix(y));
    CHECK_FALSE(in_h1(y));
  }
  for (const auto& y : rep.h1_not_prefix) {
    CHECK(in_h1(y));
    CHECK_FALSE(is_prefix(y));
  }
  CHECK(rep.prefix_not_h1.size() <= 8);
  CHECK(rep.h1_not_prefix.size() <= 8);
}
