#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <string>
#include <vector>

#include "corpus.hpp"
#include "latnet/dynamics.hpp"
#include "latnet/kripke.hpp"

using namespace latnet;

namespace {

// Successor masks of the three-agent example, frozen: states r,s,t are bits
// 1,2,4; agents 0,1,2 are the left, middle, right node of the path.
const std::vector<std::vector<uint32_t>> kSucc = {
    {3u, 7u, 6u},  // agent 0: r->{r,s}, s->{r,s,t}, t->{s,t}
    {5u, 2u, 5u},  // agent 1: r->{r,t}, s->{s},     t->{r,t}
    {5u, 3u, 6u},  // agent 2: r->{r,t}, s->{r,s},   t->{s,t}
};

// Frozen values of the modal operators on every event, computed by hand from
// the masks above. Rows are events 0..7; columns per agent: exists, forall.
struct OperatorRow {
  uint32_t e;
  uint32_t ex[3];
  uint32_t fa[3];
};
const OperatorRow kOperatorTable[] = {
    {0u, {0u, 0u, 0u}, {0u, 0u, 0u}},
    {1u, {3u, 5u, 5u}, {0u, 0u, 0u}},
    {2u, {7u, 2u, 3u}, {0u, 2u, 0u}},
    {3u, {7u, 7u, 7u}, {1u, 2u, 2u}},
    {4u, {6u, 5u, 6u}, {0u, 0u, 0u}},
    {5u, {7u, 5u, 7u}, {0u, 5u, 1u}},
    {6u, {7u, 7u, 7u}, {4u, 2u, 4u}},
    {7u, {7u, 7u, 7u}, {7u, 7u, 7u}},
};

// Frozen input/output pairs of the knowledge Laplacian on the example path.
const std::vector<std::pair<EventTuple, EventTuple>> kLaplacianTable = {
    {{0u, 0u, 0u}, {0u, 0u, 0u}},
    {{1u, 2u, 4u}, {0u, 2u, 0u}},
    {{2u, 1u, 4u}, {0u, 2u, 1u}},
    {{4u, 4u, 4u}, {0u, 2u, 1u}},
    {{2u, 2u, 2u}, {0u, 2u, 0u}},
    {{7u, 7u, 7u}, {7u, 7u, 7u}},
};

// Pair list for one agent's successor masks.
std::vector<std::pair<int, int>> pairs_of(const std::vector<uint32_t>& succ) {
  std::vector<std::pair<int, int>> out;
  for (int x = 0; x < int(succ.size()); ++x)
    for (int y = 0; y < 3; ++y)
      if (succ[x] >> y & 1) out.push_back({x, y});
  return out;
}

// The example model extended with one atom p true exactly at r.
KripkeModel example_with_atom() {
  return make_kripke_model({"r", "s", "t"},
                           {pairs_of(kSucc[0]), pairs_of(kSucc[1]), pairs_of(kSucc[2])},
                           {"p"}, {{"p"}, {}, {}});
}

// Model with the two given successor tables on states {r,s,t}, no atoms
// unless requested.
KripkeModel two_agent_model(const std::vector<uint32_t>& a, const std::vector<uint32_t>& b,
                            bool with_atom_p_at_r = false) {
  std::vector<std::string> atoms;
  std::vector<std::vector<std::string>> val(3);
  if (with_atom_p_at_r) {
    atoms = {"p"};
    val[0] = {"p"};
  }
  return make_kripke_model({"r", "s", "t"}, {pairs_of(a), pairs_of(b)}, atoms, val);
}

// Random model with optional structural constraints and two atoms.
KripkeModel random_model(SplitMix64& rng, int n_agents, int n_states, bool symmetric,
                         bool involution) {
  std::vector<std::string> states;
  for (int i = 0; i < n_states; ++i) states.push_back(std::string(1, char('a' + i)));
  std::vector<std::vector<std::pair<int, int>>> rel(n_agents);
  for (int a = 0; a < n_agents; ++a) {
    if (involution) {
      // Random involutive permutation: shuffle, then pair adjacent entries.
      std::vector<int> idx(n_states);
      for (int i = 0; i < n_states; ++i) idx[i] = i;
      for (int i = n_states - 1; i > 0; --i)
        std::swap(idx[i], idx[rng.below(uint64_t(i) + 1)]);
      for (int i = 0; i + 1 < n_states; i += 2) {
        if (rng.coin(0.6)) {
          rel[a].push_back({idx[i], idx[i + 1]});
          rel[a].push_back({idx[i + 1], idx[i]});
        } else {
          rel[a].push_back({idx[i], idx[i]});
          rel[a].push_back({idx[i + 1], idx[i + 1]});
        }
      }
      if (n_states % 2) rel[a].push_back({idx[n_states - 1], idx[n_states - 1]});
    } else {
      for (int x = 0; x < n_states; ++x)
        for (int y = symmetric ? x : 0; y < n_states; ++y)
          if (rng.coin(x == y ? 0.7 : 0.35)) {
            rel[a].push_back({x, y});
            if (symmetric) rel[a].push_back({y, x});
          }
    }
  }
  std::vector<std::vector<std::string>> val(n_states);
  for (int s = 0; s < n_states; ++s) {
    if (rng.coin(0.5)) val[s].push_back("p");
    if (rng.coin(0.5)) val[s].push_back("q");
  }
  return make_kripke_model(std::move(states), std::move(rel), {"p", "q"}, std::move(val));
}

// Depth-bounded random formula over the model's atoms.
FormulaPtr random_formula(SplitMix64& rng, const KripkeModel& m, int depth) {
  if (depth <= 0 || rng.coin(0.25)) {
    if (!m.atoms.empty() && rng.coin(0.7))
      return f_atom(m.atoms[rng.below(m.atoms.size())]);
    return f_true();
  }
  switch (rng.below(6)) {
    case 0: return f_not(random_formula(rng, m, depth - 1));
    case 1:
      return f_and(random_formula(rng, m, depth - 1), random_formula(rng, m, depth - 1));
    case 2:
      return f_or(random_formula(rng, m, depth - 1), random_formula(rng, m, depth - 1));
    case 3:
      return f_implies(random_formula(rng, m, depth - 1), random_formula(rng, m, depth - 1));
    case 4: return f_know(int(rng.below(uint64_t(m.n_agents()))), random_formula(rng, m, depth - 1));
    default:
      return f_possible(int(rng.below(uint64_t(m.n_agents()))), random_formula(rng, m, depth - 1));
  }
}

}  // namespace

TEST_CASE("relation properties on hand-picked relations") {
  // Agent 1 of the example is an equivalence relation.
  auto f = relation_properties(kSucc[1], 3);
  CHECK(f.reflexive);
  CHECK(f.transitive);
  CHECK(f.symmetric);
  CHECK(f.serial);
  CHECK(f.euclidean);
  CHECK_FALSE(f.antisymmetric);
  CHECK_FALSE(f.connex);
  // Agent 0 is reflexive, symmetric, serial but not transitive.
  auto a = relation_properties(kSucc[0], 3);
  CHECK(a.reflexive);
  CHECK(a.symmetric);
  CHECK(a.serial);
  CHECK_FALSE(a.transitive);
  // Agent 2 is serial but not symmetric.
  auto e = relation_properties(kSucc[2], 3);
  CHECK(e.serial);
  CHECK_FALSE(e.symmetric);
  // Identity relation.
  auto id = relation_properties({1u, 2u}, 2);
  CHECK(id.reflexive);
  CHECK(id.transitive);
  CHECK(id.symmetric);
  CHECK(id.antisymmetric);
  CHECK(id.serial);
  CHECK(id.euclidean);
  CHECK_FALSE(id.connex);
  // Empty relation.
  auto em = relation_properties({0u, 0u}, 2);
  CHECK_FALSE(em.reflexive);
  CHECK(em.transitive);
  CHECK(em.symmetric);
  CHECK(em.antisymmetric);
  CHECK_FALSE(em.serial);
  CHECK(em.euclidean);
  CHECK_FALSE(em.connex);
  // Total order on two states: connex but not euclidean.
  auto ch = relation_properties({3u, 2u}, 2);
  CHECK(ch.reflexive);
  CHECK(ch.transitive);
  CHECK(ch.antisymmetric);
  CHECK(ch.connex);
  CHECK_FALSE(ch.euclidean);
  CHECK_FALSE(ch.symmetric);
}

TEST_CASE("model construction validates its input") {
  CHECK_THROWS_AS(make_kripke_model({"r", "r"}, {{}, {}}, {}, {{}, {}}), ShapeMismatch);
  CHECK_THROWS_AS(make_kripke_model({"r", "s"}, {{{0, 2}}}, {}, {{}, {}}), ShapeMismatch);
  CHECK_THROWS_AS(make_kripke_model({"r"}, {{}}, {"p", "p"}, {{}}), ShapeMismatch);
  CHECK_THROWS_AS(make_kripke_model({"r"}, {{}}, {}, {{"p"}}), UnknownAtom);
  // 13 states exceed the powerset guard.
  std::vector<std::string> many;
  for (int i = 0; i < 13; ++i) many.push_back(std::string(1, char('a' + i)));
  CHECK_THROWS_AS(
      make_kripke_model(many, {{}}, {}, std::vector<std::vector<std::string>>(13)),
      TooLarge);
  auto m = example_with_atom();
  CHECK(m.atom_index("p") == 0);
  CHECK_THROWS_AS(m.atom_index("q"), UnknownAtom);
  CHECK(m.atom_mask[0] == 1u);
}

TEST_CASE("the three-agent example matches its frozen data") {
  auto m = three_agent_example_model();
  CHECK(m.states == std::vector<std::string>{"r", "s", "t"});
  REQUIRE(m.n_agents() == 3);
  for (int a = 0; a < 3; ++a) CHECK(m.succ[a] == kSucc[a]);
  auto g = three_agent_example_graph();
  CHECK(g.n == 3);
  CHECK(g.edges == std::vector<std::pair<int, int>>{{0, 1}, {1, 2}});
}

TEST_CASE("formula parsing round-trips and rejects malformed input") {
  auto m = example_with_atom();
  std::vector<std::string> good = {
      "true",
      "p",
      "(not p)",
      "(and p true)",
      "(and p p p)",
      "(or p (not p))",
      "(implies p (K 1 p))",
      "(K 0 (not (K 2 p)))",
      "(P 1 p)",
      "(E 0 1 2 p)",
  };
  for (const auto& text : good) {
    auto f = parse_formula(text);
    auto printed = format_formula(f);
    auto f2 = parse_formula(printed);
    CHECK(format_formula(f2) == printed);          // printing is stable
    CHECK(intension(m, f2) == intension(m, f));    // and meaning-preserving
  }
  // Derived operators desugar into the core connectives.
  CHECK(format_formula(parse_formula("(P 1 p)")) ==
        format_formula(f_not(f_know(1, f_not(f_atom("p"))))));
  CHECK(format_formula(parse_formula("(E 0 1 p)")) ==
        format_formula(f_and(f_know(0, f_atom("p")), f_know(1, f_atom("p")))));

  std::vector<std::string> bad = {
      "", "()", "(and)", "(not)", "(not p q)", "(implies p)", "(K p)",
      "(K 0)", "(K x p)", "p q", "(unknownop p)", "(K 0 p", "42", "(or)",
  };
  for (const auto& text : bad) CHECK_THROWS_AS(parse_formula(text), ParseError);
}

TEST_CASE("direct satisfaction agrees with the compositional intension") {
  SplitMix64 rng(314);
  for (int t = 0; t < 40; ++t) {
    auto m = random_model(rng, 2 + int(rng.below(2)), 2 + int(rng.below(3)), false, false);
    for (int k = 0; k < 20; ++k) {
      auto f = random_formula(rng, m, 4);
      uint32_t e = intension(m, f);
      for (int s = 0; s < m.n_states(); ++s) CHECK(satisfies(m, s, f) == bool(e >> s & 1));
    }
  }
}

TEST_CASE("modal operators: direct definitions, adjunction, and duality") {
  SplitMix64 rng(42);
  for (int t = 0; t < 30; ++t) {
    auto m = random_model(rng, 2, 2 + int(rng.below(3)), false, false);
    int n = m.n_states();
    for (int a = 0; a < m.n_agents(); ++a) {
      for (uint32_t e = 0; e < (1u << n); ++e) {
        // Oracles straight from the definitions.
        uint32_t ex = 0, fa = 0, di = 0;
        for (int x = 0; x < n; ++x) {
          if (e >> x & 1) ex |= m.succ[a][x];
          if ((m.succ[a][x] & ~e) == 0) fa |= 1u << x;
          if (m.succ[a][x] & e) di |= 1u << x;
        }
        CHECK(know_exists(m, a, e) == ex);
        CHECK(know_forall(m, a, e) == fa);
        CHECK(possible_diamond(m, a, e) == di);
        // Diamond is the de Morgan dual of the box, always.
        CHECK(possible_diamond(m, a, e) ==
              (m.all_states() & ~know_forall(m, a, m.all_states() & ~e)));
      }
      // Adjunction: exists(e) subset of u iff e subset of forall(u).
      for (uint32_t e = 0; e < (1u << n); ++e)
        for (uint32_t u = 0; u < (1u << n); ++u)
          CHECK(((know_exists(m, a, e) & ~u) == 0) == ((e & ~know_forall(m, a, u)) == 0));
      // The direct image along the converse coincides with the diamond
      // exactly for symmetric relations.
      bool symmetric = relation_properties(m.succ[a], n).symmetric;
      bool agree = true;
      for (uint32_t e = 0; e < (1u << n); ++e)
        if (know_exists(m, a, e) != possible_diamond(m, a, e)) agree = false;
      CHECK(agree == symmetric);
    }
  }
  // Pinned witness on the example: agent 2 is not symmetric, and on {r} the
  // direct image is {r,t} while the diamond is {r,s}.
  auto m = three_agent_example_model();
  CHECK(know_exists(m, 2, 1u) == 5u);
  CHECK(possible_diamond(m, 2, 1u) == 3u);
}

TEST_CASE("knowledge operators on the three-agent example match frozen values") {
  auto m = three_agent_example_model();
  for (const auto& row : kOperatorTable)
    for (int a = 0; a < 3; ++a) {
      CHECK(know_exists(m, a, row.e) == row.ex[a]);
      CHECK(know_forall(m, a, row.e) == row.fa[a]);
    }
}

TEST_CASE("the knowledge Laplacian on the example matches frozen values") {
  auto m = three_agent_example_model();
  auto g = three_agent_example_graph();
  for (const auto& [input, want] : kLaplacianTable)
    CHECK(kripke_laplacian(m, g, input) == want);
  // Spot-check the middle node formula on one row: forall_1(exists_0(e_0))
  // meet forall_1(exists_2(e_2)).
  EventTuple e = {2u, 1u, 4u};
  uint32_t wantJ = know_forall(m, 1, know_exists(m, 0, e[0])) &
                   know_forall(m, 1, know_exists(m, 2, e[2]));
  CHECK(kripke_laplacian(m, g, e)[1] == wantJ);
}

TEST_CASE("the knowledge sheaf shares one event lattice and matches the mask operator") {
  auto m = three_agent_example_model();
  auto g = three_agent_example_graph();
  auto s = kripke_sheaf(m, g);
  // One shared lattice object across all stalks.
  for (int i = 1; i < g.n; ++i) CHECK(s.node_stalk[i].get() == s.node_stalk[0].get());
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    CHECK(s.edge_stalk[e].get() == s.node_stalk[0].get());
  CHECK(s.F(0).mask_elements);
  CHECK(s.F(0).m == 8);
  CHECK(s.F(0).label(1) == "{r}");
  // Mask-level and lattice-level Laplacians agree everywhere (indices are
  // masks on powerset stalks).
  SplitMix64 rng(9);
  for (int t = 0; t < 200; ++t) {
    EventTuple e = {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))};
    Cochain0 x(e.begin(), e.end());
    auto viaMask = kripke_laplacian(m, g, e);
    auto viaSheaf = tarski_laplacian(s, x);
    for (int i = 0; i < g.n; ++i) CHECK(uint32_t(viaSheaf[i]) == viaMask[i]);
  }
  // Same agreement on random models and graphs.
  for (int t = 0; t < 6; ++t) {
    auto rm = random_model(rng, 3, 3, false, false);
    Graph rg = random_connected_graph(3, 0.4, rng);
    auto rs = kripke_sheaf(rm, rg);
    for (int k = 0; k < 40; ++k) {
      EventTuple e = {uint32_t(rng.below(8)), uint32_t(rng.below(8)), uint32_t(rng.below(8))};
      Cochain0 x(e.begin(), e.end());
      auto a = kripke_laplacian(rm, rg, e);
      auto b = tarski_laplacian(rs, x);
      for (int i = 0; i < rg.n; ++i) CHECK(uint32_t(b[i]) == a[i]);
    }
  }
}

TEST_CASE("epistemic section check equals the sheaf-level section test") {
  SplitMix64 rng(123);
  for (int t = 0; t < 15; ++t) {
    auto m = random_model(rng, 3, 3, false, false);
    Graph g = random_connected_graph(3, 0.4, rng);
    auto s = kripke_sheaf(m, g);
    for (int k = 0; k < 25; ++k) {
      std::vector<FormulaPtr> phis;
      for (int i = 0; i < g.n; ++i) phis.push_back(random_formula(rng, m, 3));
      Cochain0 x;
      for (const auto& f : phis) x.push_back(int(intension(m, f)));
      CHECK(epistemic_section_check(m, g, phis) == is_section(s, x));
    }
  }
}

TEST_CASE("negated-knowledge consensus characterizes sections on symmetric models") {
  SplitMix64 rng(321);
  for (int t = 0; t < 15; ++t) {
    auto m = random_model(rng, 3, 3, true, false);  // symmetric relations
    Graph g = random_connected_graph(3, 0.4, rng);
    for (int k = 0; k < 30; ++k) {
      std::vector<FormulaPtr> phis;
      for (int i = 0; i < g.n; ++i) phis.push_back(random_formula(rng, m, 3));
      CHECK(section_formula_characterization(m, g, phis) ==
            epistemic_section_check(m, g, phis));
    }
  }
}

TEST_CASE("regression: negated-knowledge consensus diverges on a non-symmetric model") {
  // Two nodes carrying agents 1 (symmetric) and 2 (not symmetric) of the
  // example, one edge, both formulas the atom p with intension {r}.
  auto m = two_agent_model(kSucc[1], kSucc[2], true);
  Graph g = Graph::simple(2, {{0, 1}});
  std::vector<FormulaPtr> phis = {f_atom("p"), f_atom("p")};
  // The tuple ({r},{r}) is a section: both direct images are {r,t}.
  CHECK(know_exists(m, 0, 1u) == 5u);
  CHECK(know_exists(m, 1, 1u) == 5u);
  CHECK(epistemic_section_check(m, g, phis));
  // But the negated-knowledge intensions differ ({s} versus {t}).
  CHECK(intension(m, f_know(0, f_not(f_atom("p")))) == 2u);
  CHECK(intension(m, f_know(1, f_not(f_atom("p")))) == 4u);
  CHECK_FALSE(section_formula_characterization(m, g, phis));
}

TEST_CASE("plain-knowledge consensus characterizes sections on involution models") {
  SplitMix64 rng(654);
  for (int t = 0; t < 20; ++t) {
    auto m = random_model(rng, 3, 2 + int(rng.below(3)), false, true);  // involutions
    Graph g = random_connected_graph(3, 0.4, rng);
    for (int k = 0; k < 30; ++k) {
      std::vector<FormulaPtr> phis;
      for (int i = 0; i < g.n; ++i) phis.push_back(random_formula(rng, m, 3));
      bool sec = epistemic_section_check(m, g, phis);
      CHECK(section_formula_characterization_serial(m, g, phis) == sec);
      CHECK(section_formula_characterization(m, g, phis) == sec);
    }
  }
}

TEST_CASE("regression: seriality alone does not support plain-knowledge consensus") {
  // Both nodes carry agent 1 of the example: an equivalence relation, hence
  // serial and symmetric (but not functional: r has two successors).
  auto m = two_agent_model(kSucc[1], kSucc[1], true);
  Graph g = Graph::simple(2, {{0, 1}});
  CHECK(relation_properties(m.succ[0], 3).serial);
  CHECK(relation_properties(m.succ[0], 3).symmetric);

  // Direction 1: equal knowledge intensions without being a section.
  // Intensions ({r}, {}) -- K(p) and K(false) are both empty.
  std::vector<FormulaPtr> d1 = {f_atom("p"), f_and(f_atom("p"), f_not(f_atom("p")))};
  CHECK(intension(m, f_know(0, d1[0])) == 0u);
  CHECK(intension(m, f_know(1, d1[1])) == 0u);
  CHECK(section_formula_characterization_serial(m, g, d1));
  CHECK_FALSE(epistemic_section_check(m, g, d1));

  // Direction 2: a section whose knowledge intensions differ.
  // Intensions ({r}, {r,t}): both direct images are {r,t}, so it is a
  // section, but K-forall gives {} versus {r,t}.
  std::vector<FormulaPtr> d2 = {f_atom("p"), f_not(f_know(0, f_not(f_atom("p"))))};
  CHECK(intension(m, d2[1]) == 5u);  // diamond of p
  CHECK(epistemic_section_check(m, g, d2));
  CHECK(intension(m, f_know(0, d2[0])) == 0u);
  CHECK(intension(m, f_know(1, d2[1])) == 5u);
  CHECK_FALSE(section_formula_characterization_serial(m, g, d2));
}

TEST_CASE("serial relations: forall of the empty event is empty, and complements nest") {
  SplitMix64 rng(777);
  for (int t = 0; t < 30; ++t) {
    auto m = random_model(rng, 2, 3, false, false);
    for (int a = 0; a < m.n_agents(); ++a) {
      bool serial = relation_properties(m.succ[a], m.n_states()).serial;
      CHECK((know_forall(m, a, 0u) == 0u) == serial);
      if (serial) {
        for (uint32_t e = 0; e < 8u; ++e) {
          uint32_t inside = know_forall(m, a, 7u & ~e);
          uint32_t outside = 7u & ~know_forall(m, a, e);
          CHECK((inside & ~outside) == 0u);  // one inclusion always holds
        }
      }
    }
  }
}

TEST_CASE("sections of knowledge sheaves have a constant edge image") {
  // The restriction at a node is the same map for every incident edge, so a
  // section pushes to a single event on every edge of a connected graph.
  SplitMix64 rng(88);
  for (int t = 0; t < 10; ++t) {
    auto rk = corpus::random_kripke_sheaf(4, 2, 0.7, 0.35, rng);
    for (const auto& x : sections_bruteforce(rk.sheaf)) {
      auto dm = delta_minus(rk.sheaf, x);
      for (std::size_t e = 1; e < dm.size(); ++e) CHECK(dm[e] == dm[0]);
    }
  }
}

TEST_CASE("group knowledge on the example: pinned values") {
  auto m = three_agent_example_model();
  std::vector<int> ij = {0, 1};
  // Everyone-knows of {r,s}: agent 0 gives {r}, agent 1 gives {s}.
  CHECK(everyone_intension(m, ij, 3u) == 0u);
  // Distributed knowledge of {r}: pooling shrinks successor sets to
  // singletons, so the group can pin the true state.
  CHECK(distributed_knowledge_intension(m, ij, 1u) == 1u);
  CHECK(know_forall(m, 0, 1u) == 0u);  // neither agent alone can
  CHECK(know_forall(m, 1, 1u) == 0u);
  // Common knowledge: the union relation reaches everything, so only the
  // full event is commonly known.
  CHECK(common_knowledge_intension(m, ij, 7u) == 7u);
  for (uint32_t e = 0; e < 7u; ++e) CHECK(common_knowledge_intension(m, ij, e) == 0u);
}

TEST_CASE("group knowledge laws on random models") {
  SplitMix64 rng(4242);
  for (int t = 0; t < 20; ++t) {
    auto m = random_model(rng, 3, 3, false, false);
    std::vector<int> all = {0, 1, 2};
    for (uint32_t e = 0; e < 8u; ++e) {
      uint32_t E = everyone_intension(m, all, e);
      uint32_t D = distributed_knowledge_intension(m, all, e);
      uint32_t C = common_knowledge_intension(m, all, e);
      // C <= E <= each box <= D.
      CHECK((C & ~E) == 0u);
      for (int a = 0; a < 3; ++a) {
        CHECK((E & ~know_forall(m, a, e)) == 0u);
        CHECK((know_forall(m, a, e) & ~D) == 0u);
      }
      // E is the meet of the boxes.
      uint32_t meetBoxes = 7u;
      for (int a = 0; a < 3; ++a) meetBoxes &= know_forall(m, a, e);
      CHECK(E == meetBoxes);
      // Common knowledge is the greatest fixed point of u -> E(e) meet E(u).
      uint32_t u = 7u;
      for (int it = 0; it < 8; ++it) u = (E & everyone_intension(m, all, u));
      CHECK(C == u);
      // C is a fixed point of that map.
      CHECK(C == (E & everyone_intension(m, all, C)));
    }
    // Degenerate agent sets.
    for (uint32_t e = 0; e < 8u; ++e) {
      CHECK(everyone_intension(m, {}, e) == 7u);
      CHECK(common_knowledge_intension(m, {}, e) == 7u);
      CHECK(distributed_knowledge_intension(m, {}, e) == (e == 7u ? 7u : 0u));
    }
  }
}

TEST_CASE("the syntactic Laplacian spells out knowledge of neighbors' possibilities") {
  auto m = example_with_atom();
  auto g = three_agent_example_graph();
  std::vector<FormulaPtr> phis = {f_atom("p"), f_true(), f_atom("p")};
  auto at1 = syntactic_laplacian(g, 1, phis);
  CHECK(format_formula(at1) ==
        format_formula(f_and(f_know(1, f_not(f_know(0, f_not(phis[0])))),
                             f_know(1, f_not(f_know(2, f_not(phis[2])))))));
  // Empty neighborhood gives the constant-true formula.
  Graph iso = Graph::simple(3, {{0, 1}});
  CHECK(format_formula(syntactic_laplacian(iso, 2, phis)) == format_formula(f_true()));
  CHECK_THROWS_AS(syntactic_laplacian(g, 7, phis), ShapeMismatch);
}

TEST_CASE("the syntactic Laplacian's intension composes box after diamond") {
  SplitMix64 rng(555);
  for (int t = 0; t < 15; ++t) {
    auto m = random_model(rng, 3, 3, false, false);
    Graph g = random_connected_graph(3, 0.4, rng);
    for (int k = 0; k < 15; ++k) {
      std::vector<FormulaPtr> phis;
      for (int i = 0; i < g.n; ++i) phis.push_back(random_formula(rng, m, 3));
      for (int i = 0; i < g.n; ++i) {
        uint32_t want = m.all_states();
        for (int j : g.nbrs[i])
          want &= know_forall(m, i, possible_diamond(m, j, intension(m, phis[j])));
        CHECK(intension(m, syntactic_laplacian(g, i, phis)) == want);
      }
    }
  }
}

TEST_CASE("syntactic and semantic Laplacians agree exactly on symmetric models") {
  SplitMix64 rng(556);
  for (int t = 0; t < 12; ++t) {
    auto m = random_model(rng, 3, 3, true, false);  // symmetric
    Graph g = random_connected_graph(3, 0.4, rng);
    for (int k = 0; k < 15; ++k) {
      std::vector<FormulaPtr> phis;
      EventTuple e;
      for (int i = 0; i < g.n; ++i) {
        phis.push_back(random_formula(rng, m, 3));
        e.push_back(intension(m, phis[i]));
      }
      auto le = kripke_laplacian(m, g, e);
      for (int i = 0; i < g.n; ++i)
        CHECK(intension(m, syntactic_laplacian(g, i, phis)) == le[i]);
    }
  }
  // Pinned divergence on the (non-symmetric) example: with formulas
  // (true, true, p), the middle node gets {r,t} from the semantic operator
  // but {s} from the syntactic formula.
  auto m = example_with_atom();
  auto g = three_agent_example_graph();
  std::vector<FormulaPtr> phis = {f_true(), f_true(), f_atom("p")};
  EventTuple e = {7u, 7u, 1u};
  CHECK(kripke_laplacian(m, g, e)[1] == 5u);
  CHECK(intension(m, syntactic_laplacian(g, 1, phis)) == 2u);
}

TEST_CASE("diffusive knowledge iterates the syntactic Laplacian") {
  auto m = example_with_atom();
  auto g = three_agent_example_graph();
  auto phi = f_atom("p");
  std::vector<int> A = {0, 1, 2};
  CHECK_THROWS_AS(diffusive(g, A, phi, 0), ShapeMismatch);
  CHECK_THROWS_AS(diffusive(g, {5}, phi, 1), ShapeMismatch);
  // Semantic oracle: ell(u) = meet over i in A, j in N(i) of box_i(diamond_j(u)).
  auto ell = [&](uint32_t u) {
    uint32_t acc = m.all_states();
    for (int i : A)
      for (int j : g.nbrs[i]) acc &= know_forall(m, i, possible_diamond(m, j, u));
    return acc;
  };
  uint32_t cur = intension(m, phi);
  for (int k = 1; k <= 4; ++k) {
    cur = ell(cur);
    CHECK(intension(m, diffusive(g, A, phi, k)) == cur);
  }
  // Subsets of agents too.
  SplitMix64 rng(606);
  for (int t = 0; t < 10; ++t) {
    auto rm = random_model(rng, 3, 3, false, false);
    Graph rg = random_connected_graph(3, 0.4, rng);
    std::vector<int> agents;
    for (int i = 0; i < 3; ++i)
      if (rng.coin(0.6)) agents.push_back(i);
    if (agents.empty()) agents.push_back(0);
    auto f = random_formula(rng, rm, 2);
    auto ell2 = [&](uint32_t u) {
      uint32_t acc = rm.all_states();
      for (int i : agents)
        for (int j : rg.nbrs[i]) acc &= know_forall(rm, i, possible_diamond(rm, j, u));
      return acc;
    };
    uint32_t c2 = intension(rm, f);
    for (int k = 1; k <= 3; ++k) {
      c2 = ell2(c2);
      CHECK(intension(rm, diffusive(rg, agents, f, k)) == c2);
    }
  }
}

TEST_CASE("the omega iterate accumulates every finite iterate") {
  SplitMix64 rng(607);
  for (int t = 0; t < 15; ++t) {
    auto m = random_model(rng, 3, 3, false, false);
    Graph g = random_connected_graph(3, 0.4, rng);
    std::vector<int> A = {0, 1, 2};
    auto phi = random_formula(rng, m, 3);
    // Independent oracle: run the semantic iterate far past the cycle length
    // of an 8-element state space and intersect everything.
    auto ell = [&](uint32_t u) {
      uint32_t acc = m.all_states();
      for (int i : A)
        for (int j : g.nbrs[i]) acc &= know_forall(m, i, possible_diamond(m, j, u));
      return acc;
    };
    uint32_t cur = intension(m, phi);
    uint32_t acc = m.all_states();
    for (int k = 0; k < 64; ++k) {
      cur = ell(cur);
      acc &= cur;
    }
    CHECK(diffusive_omega_intension(m, g, A, phi) == acc);
  }
  // The omega intension refines every finite iterate.
  auto m = example_with_atom();
  auto g = three_agent_example_graph();
  auto phi = f_atom("p");
  uint32_t om = diffusive_omega_intension(m, g, {0, 1, 2}, phi);
  for (int k = 1; k <= 5; ++k) {
    uint32_t fin = intension(m, diffusive(g, {0, 1, 2}, phi, k));
    CHECK((om & ~fin) == 0u);
  }
}

TEST_CASE("derived connectives have the expected intensions") {
  auto m = example_with_atom();
  uint32_t p = intension(m, f_atom("p"));
  CHECK(p == 1u);
  CHECK(intension(m, f_or(f_atom("p"), f_know(1, f_atom("p")))) ==
        (p | intension(m, f_know(1, f_atom("p")))));
  CHECK(intension(m, f_implies(f_atom("p"), f_atom("p"))) == 7u);
  CHECK(intension(m, f_not(f_atom("p"))) == 6u);
  CHECK(intension(m, f_true()) == 7u);
  CHECK(intension(m, f_and(std::vector<FormulaPtr>{})) == 7u);
  // Mutual knowledge = meet of boxes = everyone_intension.
  auto ef = f_everyone({0, 1}, f_atom("p"));
  CHECK(intension(m, ef) == everyone_intension(m, {0, 1}, p));
  auto pf = f_possible(2, f_atom("p"));
  CHECK(intension(m, pf) == possible_diamond(m, 2, p));
}
