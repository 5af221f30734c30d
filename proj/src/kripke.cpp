#include "latnet/kripke.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "latnet/errors.hpp"

namespace latnet {

namespace {

constexpr int kMaxStates = 12;  // events index a powerset lattice

void check_agent(const KripkeModel& m, int agent) {
  if (agent < 0 || agent >= m.n_agents())
    throw BadAgent("agent " + std::to_string(agent) + " out of range (model has " +
                   std::to_string(m.n_agents()) + ")");
}

void check_event(const KripkeModel& m, uint32_t e) {
  if (e & ~m.all_states()) throw ShapeMismatch("event mask names states outside the model");
}

bool bare_token(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c == '(' || c == ')' || std::isspace(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

RelationFlags relation_properties(const std::vector<uint32_t>& succ, int n_states) {
  const int n = n_states;
  if (static_cast<int>(succ.size()) != n)
    throw ShapeMismatch("need one successor mask per state");
  RelationFlags f;
  f.reflexive = f.transitive = f.symmetric = f.antisymmetric = f.serial = f.euclidean =
      f.connex = true;
  for (int x = 0; x < n; ++x) {
    if (!(succ[x] >> x & 1)) f.reflexive = false;
    if (succ[x] == 0) f.serial = false;
    for (int y = 0; y < n; ++y) {
      const bool xy = succ[x] >> y & 1;
      const bool yx = succ[y] >> x & 1;
      if (xy && (succ[y] & ~succ[x])) f.transitive = false;
      if (xy && !yx) f.symmetric = false;
      if (x != y && xy && yx) f.antisymmetric = false;
      if (xy && (succ[x] & ~succ[y])) f.euclidean = false;
      if (!xy && !yx) f.connex = false;
    }
  }
  return f;
}

int KripkeModel::atom_index(const std::string& name) const {
  for (size_t i = 0; i < atoms.size(); ++i)
    if (atoms[i] == name) return static_cast<int>(i);
  throw UnknownAtom("atom '" + name + "' is not in the model");
}

KripkeModel make_kripke_model(std::vector<std::string> states,
                              std::vector<std::vector<std::pair<int, int>>> relations,
                              std::vector<std::string> atoms,
                              std::vector<std::vector<std::string>> valuation) {
  KripkeModel m;
  const int n = static_cast<int>(states.size());
  if (n < 1) throw ShapeMismatch("a model needs at least one state");
  if (n > kMaxStates)
    throw TooLarge("state count " + std::to_string(n) + " exceeds the event-lattice cap " +
                   std::to_string(kMaxStates));
  if (std::set<std::string>(states.begin(), states.end()).size() != states.size())
    throw ShapeMismatch("state names must be distinct");
  for (const auto& s : states)
    if (!bare_token(s)) throw ShapeMismatch("state name '" + s + "' is not a bare token");
  if (std::set<std::string>(atoms.begin(), atoms.end()).size() != atoms.size())
    throw ShapeMismatch("atom names must be distinct");
  for (const auto& a : atoms)
    if (!bare_token(a)) throw ShapeMismatch("atom name '" + a + "' is not a bare token");

  m.states = std::move(states);
  m.succ.assign(relations.size(), std::vector<uint32_t>(n, 0));
  for (size_t i = 0; i < relations.size(); ++i)
    for (auto [a, b] : relations[i]) {
      if (a < 0 || a >= n || b < 0 || b >= n)
        throw ShapeMismatch("relation pair (" + std::to_string(a) + "," + std::to_string(b) +
                            ") outside the state set");
      m.succ[i][a] |= 1u << b;
    }

  m.atoms = std::move(atoms);
  m.atom_mask.assign(m.atoms.size(), 0);
  if (static_cast<int>(valuation.size()) != n)
    throw ShapeMismatch("valuation needs one entry per state");
  for (int s = 0; s < n; ++s)
    for (const auto& name : valuation[s]) m.atom_mask[m.atom_index(name)] |= 1u << s;
  return m;
}

KripkeModel three_agent_example_model() {
  // States r, s, t; three agents whose accessibility relations are, in
  // successor-mask form over bits (r=1, s=2, t=4):
  //   agent 0: r -> {r,s},  s -> {r,s,t}, t -> {s,t}   (symmetric)
  //   agent 1: r -> {r,t},  s -> {s},     t -> {r,t}   (symmetric)
  //   agent 2: r -> {r,t},  s -> {r,s},   t -> {s,t}   (not symmetric)
  KripkeModel m;
  m.states = {"r", "s", "t"};
  m.succ = {{3u, 7u, 6u}, {5u, 2u, 5u}, {5u, 3u, 6u}};
  return m;
}

Graph three_agent_example_graph() { return Graph::simple(3, {{0, 1}, {1, 2}}); }

// ----- formulas ------------------------------------------------------------

FormulaPtr f_true() {
  static const FormulaPtr t = std::make_shared<Formula>();
  return t;
}

FormulaPtr f_atom(std::string name) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::atom;
  f->name = std::move(name);
  return f;
}

FormulaPtr f_not(FormulaPtr a) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::negation;
  f->a = std::move(a);
  return f;
}

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::conjunction;
  f->a = std::move(a);
  f->b = std::move(b);
  return f;
}

FormulaPtr f_and(const std::vector<FormulaPtr>& parts) {
  if (parts.empty()) return f_true();
  FormulaPtr acc = parts[0];
  for (size_t i = 1; i < parts.size(); ++i) acc = f_and(acc, parts[i]);
  return acc;
}

FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return f_not(f_and(f_not(std::move(a)), f_not(std::move(b))));
}

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return f_not(f_and(std::move(a), f_not(std::move(b))));
}

FormulaPtr f_know(int agent, FormulaPtr a) {
  if (agent < 0) throw BadAgent("agent index must be nonnegative");
  auto f = std::make_shared<Formula>();
  f->kind = Formula::Kind::know;
  f->agent = agent;
  f->a = std::move(a);
  return f;
}

FormulaPtr f_possible(int agent, FormulaPtr a) { return f_not(f_know(agent, f_not(std::move(a)))); }

FormulaPtr f_everyone(const std::vector<int>& agents, const FormulaPtr& a) {
  std::vector<FormulaPtr> parts;
  parts.reserve(agents.size());
  for (int i : agents) parts.push_back(f_know(i, a));
  return f_and(parts);
}

std::string format_formula(const FormulaPtr& f) {
  if (!f) throw ShapeMismatch("null formula");
  switch (f->kind) {
    case Formula::Kind::truth:
      return "true";
    case Formula::Kind::atom:
      return f->name;
    case Formula::Kind::negation:
      return "(not " + format_formula(f->a) + ")";
    case Formula::Kind::conjunction:
      return "(and " + format_formula(f->a) + " " + format_formula(f->b) + ")";
    case Formula::Kind::know:
      return "(K " + std::to_string(f->agent) + " " + format_formula(f->a) + ")";
  }
  throw ShapeMismatch("corrupt formula node");
}

namespace {

struct Tokens {
  std::vector<std::string> toks;
  size_t pos = 0;

  bool done() const { return pos == toks.size(); }
  const std::string& peek() const {
    if (done()) throw ParseError("unexpected end of formula");
    return toks[pos];
  }
  std::string next() {
    if (done()) throw ParseError("unexpected end of formula");
    return toks[pos++];
  }
  void expect(const std::string& t) {
    if (next() != t) throw ParseError("expected '" + t + "' near token " + std::to_string(pos));
  }
};

Tokens tokenize(const std::string& text) {
  Tokens ts;
  std::string cur;
  auto flush = [&] {
    if (!cur.empty()) {
      ts.toks.push_back(cur);
      cur.clear();
    }
  };
  for (char c : text) {
    if (c == '(' || c == ')') {
      flush();
      ts.toks.push_back(std::string(1, c));
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      flush();
    } else {
      cur += c;
    }
  }
  flush();
  return ts;
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
    return std::isdigit(static_cast<unsigned char>(c));
  });
}

int parse_agent(Tokens& ts) {
  std::string t = ts.next();
  if (!all_digits(t)) throw ParseError("expected an agent index, got '" + t + "'");
  return std::stoi(t);
}

FormulaPtr parse_expr(Tokens& ts) {
  std::string t = ts.next();
  if (t == ")") throw ParseError("unexpected ')'");
  if (t != "(") {
    if (t == "true") return f_true();
    if (all_digits(t)) throw ParseError("bare number '" + t + "' is not a formula");
    return f_atom(t);
  }
  std::string op = ts.next();
  if (op == "not") {
    FormulaPtr a = parse_expr(ts);
    ts.expect(")");
    return f_not(a);
  }
  if (op == "and" || op == "or") {
    std::vector<FormulaPtr> parts;
    while (ts.peek() != ")") parts.push_back(parse_expr(ts));
    ts.expect(")");
    if (parts.empty()) throw ParseError("'" + op + "' needs at least one operand");
    if (op == "and") return f_and(parts);
    FormulaPtr acc = parts[0];
    for (size_t i = 1; i < parts.size(); ++i) acc = f_or(acc, parts[i]);
    return acc;
  }
  if (op == "implies") {
    FormulaPtr a = parse_expr(ts);
    FormulaPtr b = parse_expr(ts);
    ts.expect(")");
    return f_implies(a, b);
  }
  if (op == "K" || op == "P") {
    int agent = parse_agent(ts);
    FormulaPtr a = parse_expr(ts);
    ts.expect(")");
    return op == "K" ? f_know(agent, a) : f_possible(agent, a);
  }
  if (op == "E") {
    std::vector<int> agents;
    while (all_digits(ts.peek())) agents.push_back(parse_agent(ts));
    FormulaPtr a = parse_expr(ts);
    ts.expect(")");
    if (agents.empty()) throw ParseError("'E' needs at least one agent index");
    return f_everyone(agents, a);
  }
  throw ParseError("unknown operator '" + op + "'");
}

}  // namespace

FormulaPtr parse_formula(const std::string& text) {
  Tokens ts = tokenize(text);
  if (ts.done()) throw ParseError("empty formula");
  FormulaPtr f = parse_expr(ts);
  if (!ts.done()) throw ParseError("trailing tokens after formula");
  return f;
}

// ----- evaluation ------------------------------------------------------------

bool satisfies(const KripkeModel& m, int state, const FormulaPtr& f) {
  if (!f) throw ShapeMismatch("null formula");
  if (state < 0 || state >= m.n_states()) throw ShapeMismatch("state out of range");
  switch (f->kind) {
    case Formula::Kind::truth:
      return true;
    case Formula::Kind::atom:
      return m.atom_mask[m.atom_index(f->name)] >> state & 1;
    case Formula::Kind::negation:
      return !satisfies(m, state, f->a);
    case Formula::Kind::conjunction:
      return satisfies(m, state, f->a) && satisfies(m, state, f->b);
    case Formula::Kind::know: {
      check_agent(m, f->agent);
      for (uint32_t rest = m.succ[f->agent][state]; rest; rest &= rest - 1)
        if (!satisfies(m, __builtin_ctz(rest), f->a)) return false;
      return true;
    }
  }
  throw ShapeMismatch("corrupt formula node");
}

uint32_t intension(const KripkeModel& m, const FormulaPtr& f) {
  if (!f) throw ShapeMismatch("null formula");
  switch (f->kind) {
    case Formula::Kind::truth:
      return m.all_states();
    case Formula::Kind::atom:
      return m.atom_mask[m.atom_index(f->name)];
    case Formula::Kind::negation:
      return m.all_states() & ~intension(m, f->a);
    case Formula::Kind::conjunction:
      return intension(m, f->a) & intension(m, f->b);
    case Formula::Kind::know:
      return know_forall(m, f->agent, intension(m, f->a));
  }
  throw ShapeMismatch("corrupt formula node");
}

uint32_t know_forall(const KripkeModel& m, int agent, uint32_t e) {
  check_agent(m, agent);
  check_event(m, e);
  uint32_t out = 0;
  for (int s = 0; s < m.n_states(); ++s)
    if ((m.succ[agent][s] & ~e) == 0) out |= 1u << s;
  return out;
}

uint32_t know_exists(const KripkeModel& m, int agent, uint32_t e) {
  check_agent(m, agent);
  check_event(m, e);
  uint32_t out = 0;
  for (uint32_t rest = e; rest; rest &= rest - 1) out |= m.succ[agent][__builtin_ctz(rest)];
  return out;
}

uint32_t possible_diamond(const KripkeModel& m, int agent, uint32_t e) {
  check_agent(m, agent);
  check_event(m, e);
  uint32_t out = 0;
  for (int s = 0; s < m.n_states(); ++s)
    if (m.succ[agent][s] & e) out |= 1u << s;
  return out;
}

uint32_t everyone_intension(const KripkeModel& m, const std::vector<int>& agents, uint32_t e) {
  uint32_t acc = m.all_states();
  for (int i : agents) acc &= know_forall(m, i, e);
  return acc;
}

uint32_t distributed_knowledge_intension(const KripkeModel& m, const std::vector<int>& agents,
                                         uint32_t e) {
  check_event(m, e);
  uint32_t out = 0;
  for (int s = 0; s < m.n_states(); ++s) {
    uint32_t pooled = m.all_states();
    for (int i : agents) {
      check_agent(m, i);
      pooled &= m.succ[i][s];
    }
    if ((pooled & ~e) == 0) out |= 1u << s;
  }
  return out;
}

uint32_t common_knowledge_intension(const KripkeModel& m, const std::vector<int>& agents,
                                    uint32_t e) {
  check_event(m, e);
  const int n = m.n_states();
  std::vector<uint32_t> reach(n, 0);
  for (int i : agents) {
    check_agent(m, i);
    for (int s = 0; s < n; ++s) reach[s] |= m.succ[i][s];
  }
  // Transitive closure: everything reachable by one or more steps.
  for (bool grew = true; grew;) {
    grew = false;
    for (int s = 0; s < n; ++s) {
      uint32_t acc = reach[s];
      for (uint32_t rest = reach[s]; rest; rest &= rest - 1) acc |= reach[__builtin_ctz(rest)];
      if (acc != reach[s]) {
        reach[s] = acc;
        grew = true;
      }
    }
  }
  uint32_t out = 0;
  for (int s = 0; s < n; ++s)
    if ((reach[s] & ~e) == 0) out |= 1u << s;
  return out;
}

// ----- sheaf-side semantics ---------------------------------------------------

LatticePtr event_lattice(const KripkeModel& m) { return powerset_lattice(m.states); }

GaloisConnection kripke_connection(const KripkeModel& m, int agent) {
  return kripke_connection(m, agent, event_lattice(m));
}

GaloisConnection kripke_connection(const KripkeModel& m, int agent, const LatticePtr& events) {
  check_agent(m, agent);
  const int n = m.n_states();
  Relation r;
  r.nx = r.ny = n;
  r.tbl.assign(static_cast<size_t>(n) * n, 0);
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y) r.tbl[static_cast<size_t>(x) * n + y] = m.succ[agent][x] >> y & 1;
  return from_relation_covariant(r, events, events);
}

TarskiSheaf kripke_sheaf(const KripkeModel& m, Graph g) {
  if (g.n != m.n_agents())
    throw ShapeMismatch("graph has " + std::to_string(g.n) + " nodes but the model has " +
                        std::to_string(m.n_agents()) + " agents");
  LatticePtr E = event_lattice(m);
  std::vector<GaloisConnection> conn;
  conn.reserve(g.n);
  for (int i = 0; i < g.n; ++i) conn.push_back(kripke_connection(m, i, E));

  const int ne = static_cast<int>(g.edges.size());
  std::vector<LatticePtr> nodes(g.n, E), edges(ne, E);
  std::vector<std::array<GaloisConnection, 2>> restr;
  restr.reserve(ne);
  for (int e = 0; e < ne; ++e) {
    const auto [i, j] = g.edges[e];
    restr.push_back({conn[i], conn[j]});
  }
  return make_sheaf(std::move(g), std::move(nodes), std::move(edges), std::move(restr));
}

EventTuple kripke_laplacian(const KripkeModel& m, const Graph& g, const EventTuple& e) {
  if (g.n != m.n_agents()) throw ShapeMismatch("graph/model agent count mismatch");
  if (static_cast<int>(e.size()) != g.n) throw ShapeMismatch("need one event per node");
  EventTuple out(g.n);
  for (int i = 0; i < g.n; ++i) {
    uint32_t acc = m.all_states();
    for (int j : g.nbrs[i]) acc &= know_forall(m, i, know_exists(m, j, e[j]));
    out[i] = acc;
  }
  return out;
}

bool epistemic_section_check(const KripkeModel& m, const Graph& g,
                             const std::vector<FormulaPtr>& phis) {
  if (g.n != m.n_agents()) throw ShapeMismatch("graph/model agent count mismatch");
  if (static_cast<int>(phis.size()) != g.n) throw ShapeMismatch("need one formula per node");
  std::vector<uint32_t> e(g.n);
  for (int i = 0; i < g.n; ++i) e[i] = intension(m, phis[i]);
  for (const auto& [i, j] : g.edges)
    if (know_exists(m, i, e[i]) != know_exists(m, j, e[j])) return false;
  return true;
}

bool section_formula_characterization(const KripkeModel& m, const Graph& g,
                                      const std::vector<FormulaPtr>& phis) {
  if (static_cast<int>(phis.size()) != g.n) throw ShapeMismatch("need one formula per node");
  for (const auto& [i, j] : g.edges)
    if (intension(m, f_know(i, f_not(phis[i]))) != intension(m, f_know(j, f_not(phis[j]))))
      return false;
  return true;
}

bool section_formula_characterization_serial(const KripkeModel& m, const Graph& g,
                                             const std::vector<FormulaPtr>& phis) {
  if (static_cast<int>(phis.size()) != g.n) throw ShapeMismatch("need one formula per node");
  for (const auto& [i, j] : g.edges)
    if (intension(m, f_know(i, phis[i])) != intension(m, f_know(j, phis[j]))) return false;
  return true;
}

// ----- diffusive knowledge -----------------------------------------------------

FormulaPtr syntactic_laplacian(const Graph& g, int i, const std::vector<FormulaPtr>& phis) {
  if (i < 0 || i >= g.n) throw ShapeMismatch("node out of range");
  if (static_cast<int>(phis.size()) != g.n) throw ShapeMismatch("need one formula per node");
  std::vector<FormulaPtr> parts;
  parts.reserve(g.nbrs[i].size());
  for (int j : g.nbrs[i]) parts.push_back(f_know(i, f_not(f_know(j, f_not(phis[j])))));
  return f_and(parts);
}

FormulaPtr diffusive(const Graph& g, const std::vector<int>& agents, const FormulaPtr& phi,
                     int k) {
  if (k < 1) throw ShapeMismatch("diffusive iterate needs k >= 1");
  for (int i : agents)
    if (i < 0 || i >= g.n) throw ShapeMismatch("node out of range");
  FormulaPtr cur = phi;
  for (int round = 0; round < k; ++round) {
    std::vector<FormulaPtr> tuple(g.n, cur);
    std::vector<FormulaPtr> parts;
    parts.reserve(agents.size());
    for (int i : agents) parts.push_back(syntactic_laplacian(g, i, tuple));
    cur = f_and(parts);
  }
  return cur;
}

uint32_t diffusive_omega_intension(const KripkeModel& m, const Graph& g,
                                   const std::vector<int>& agents, const FormulaPtr& phi) {
  if (g.n != m.n_agents()) throw ShapeMismatch("graph/model agent count mismatch");
  auto step = [&](uint32_t u) {
    uint32_t acc = m.all_states();
    for (int i : agents) {
      if (i < 0 || i >= g.n) throw ShapeMismatch("node out of range");
      for (int j : g.nbrs[i]) acc &= know_forall(m, i, possible_diamond(m, j, u));
    }
    return acc;
  };
  // The iterate sequence lives in a finite powerset, so it is eventually
  // periodic; accumulate the running intersection until a value repeats.
  std::set<uint32_t> seen;
  uint32_t acc = m.all_states();
  uint32_t cur = intension(m, phi);
  while (true) {
    cur = step(cur);
    acc &= cur;
    if (!seen.insert(cur).second) break;
  }
  return acc;
}

}  // namespace latnet
