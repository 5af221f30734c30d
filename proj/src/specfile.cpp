#include "latnet/specfile.hpp"

#include <array>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>

#include "json.hpp"
#include "latnet/errors.hpp"

namespace latnet {

namespace {

using nlohmann::ordered_json;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw ParseError(where + ": " + what);
}

const ordered_json& need(const ordered_json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing key '") + key + "'");
  return *it;
}

int need_int(const ordered_json& j, const char* key, const std::string& where) {
  const auto& v = need(j, key, where);
  if (!v.is_number_integer()) fail(where, std::string("'") + key + "' must be an integer");
  return v.get<int>();
}

std::string need_string(const ordered_json& j, const char* key, const std::string& where) {
  const auto& v = need(j, key, where);
  if (!v.is_string()) fail(where, std::string("'") + key + "' must be a string");
  return v.get<std::string>();
}

std::vector<std::string> string_list(const ordered_json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of strings");
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) fail(where, "expected an array of strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::vector<int> int_list(const ordered_json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of integers");
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer()) fail(where, "expected an array of integers");
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<std::pair<int, int>> pair_list(const ordered_json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of [a,b] pairs");
  std::vector<std::pair<int, int>> out;
  for (const auto& x : v) {
    auto p = int_list(x, where);
    if (p.size() != 2) fail(where, "expected [a,b] pairs");
    out.emplace_back(p[0], p[1]);
  }
  return out;
}

std::vector<std::vector<int>> rounds_list(const ordered_json& v, const std::string& where) {
  if (!v.is_array()) fail(where, "expected an array of node-id arrays");
  std::vector<std::vector<int>> out;
  for (const auto& x : v) out.push_back(int_list(x, where));
  return out;
}

SpecLattice parse_lattice(const ordered_json& j, const std::string& where) {
  SpecLattice out;
  out.kind = need_string(j, "kind", where);
  if (out.kind == "chain" || out.kind == "partition") {
    out.n = need_int(j, "n", where);
  } else if (out.kind == "powerset") {
    out.ground = string_list(need(j, "ground", where), where);
  } else if (out.kind == "product") {
    out.factors = string_list(need(j, "factors", where), where);
  } else if (out.kind == "explicit") {
    const auto& rows = need(j, "leq", where);
    if (!rows.is_array()) fail(where, "'leq' must be an array of rows");
    for (const auto& r : rows) out.leq.push_back(int_list(r, where));
    if (j.contains("labels")) out.labels = string_list(j["labels"], where);
  } else {
    fail(where, "unknown lattice kind '" + out.kind + "'");
  }
  return out;
}

}  // namespace

SheafSpecFile parse_spec_text(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ParseError("top level must be a JSON object");

  SheafSpecFile d;

  const auto& graph = need(j, "graph", "graph");
  d.nodes = need_int(graph, "nodes", "graph");
  d.edges = pair_list(need(graph, "edges", "graph"), "graph.edges");

  if (j.contains("kripke")) {
    d.has_kripke = true;
    const auto& k = j["kripke"];
    d.k_states = string_list(need(k, "states", "kripke"), "kripke.states");
    const auto& ag = need(k, "agents", "kripke");
    if (!ag.is_array()) fail("kripke", "'agents' must be an array of pair lists");
    for (const auto& a : ag) d.k_agents.push_back(pair_list(a, "kripke.agents"));
    if (k.contains("atoms")) d.k_atoms = string_list(k["atoms"], "kripke.atoms");
    if (k.contains("valuation")) {
      const auto& val = k["valuation"];
      if (!val.is_array()) fail("kripke", "'valuation' must be an array per state");
      for (const auto& v : val) d.k_valuation.push_back(string_list(v, "kripke.valuation"));
    } else {
      d.k_valuation.assign(d.k_states.size(), {});
    }
    if (j.contains("lattices") || j.contains("node_stalks") || j.contains("edge_stalks") ||
        j.contains("restrictions"))
      fail("kripke", "a possible-worlds spec must not also carry explicit sheaf sections");
  } else {
    const auto& lats = need(j, "lattices", "lattices");
    if (!lats.is_object()) fail("lattices", "must be an object of named lattices");
    for (const auto& [name, body] : lats.items())
      d.lattices[name] = parse_lattice(body, "lattices." + name);
    d.node_stalks = string_list(need(j, "node_stalks", "node_stalks"), "node_stalks");
    d.edge_stalks = string_list(need(j, "edge_stalks", "edge_stalks"), "edge_stalks");
    const auto& rs = need(j, "restrictions", "restrictions");
    if (!rs.is_array()) fail("restrictions", "must be an array");
    for (const auto& r : rs) {
      SpecRestriction sr;
      sr.node = need_int(r, "node", "restrictions");
      auto e = int_list(need(r, "edge", "restrictions"), "restrictions.edge");
      if (e.size() != 2) fail("restrictions", "'edge' must be [i,j]");
      sr.edge = {e[0], e[1]};
      sr.kind = need_string(r, "kind", "restrictions");
      if (sr.kind == "relation")
        sr.pairs = pair_list(need(r, "pairs", "restrictions"), "restrictions.pairs");
      else if (sr.kind == "table")
        sr.lower = int_list(need(r, "lower", "restrictions"), "restrictions.lower");
      else
        fail("restrictions", "unknown restriction kind '" + sr.kind + "'");
      d.restrictions.push_back(std::move(sr));
    }
  }

  if (j.contains("x0")) {
    const auto& x0 = j["x0"];
    d.x0_kind = need_string(x0, "kind", "x0");
    if (d.x0_kind == "explicit")
      d.x0_values = string_list(need(x0, "values", "x0"), "x0.values");
    else if (d.x0_kind != "top" && d.x0_kind != "bottom")
      fail("x0", "kind must be top, bottom, or explicit");
  }

  if (j.contains("schedule")) {
    d.has_schedule = true;
    const auto& s = j["schedule"];
    d.schedule_kind = need_string(s, "kind", "schedule");
    if (d.schedule_kind == "uniform1") {
      const auto& v = need(s, "seed", "schedule");
      if (!v.is_number_unsigned() && !v.is_number_integer())
        fail("schedule", "'seed' must be an integer");
      d.schedule_seed = v.get<std::uint64_t>();
    } else if (d.schedule_kind == "periodic" || d.schedule_kind == "explicit") {
      d.schedule_rounds = rounds_list(need(s, "rounds", "schedule"), "schedule.rounds");
    } else if (d.schedule_kind != "sync") {
      fail("schedule", "kind must be sync, uniform1, periodic, or explicit");
    }
  }

  return d;
}

SheafSpecFile load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open spec file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

std::string serialize_spec(const SheafSpecFile& d) {
  ordered_json j;

  j["graph"] = {{"nodes", d.nodes}, {"edges", d.edges}};

  if (d.has_kripke) {
    ordered_json k;
    k["states"] = d.k_states;
    k["agents"] = d.k_agents;
    k["atoms"] = d.k_atoms;
    k["valuation"] = d.k_valuation;
    j["kripke"] = std::move(k);
  } else {
    ordered_json lats = ordered_json::object();
    for (const auto& [name, L] : d.lattices) {
      ordered_json body;
      body["kind"] = L.kind;
      if (L.kind == "chain" || L.kind == "partition") body["n"] = L.n;
      if (L.kind == "powerset") body["ground"] = L.ground;
      if (L.kind == "product") body["factors"] = L.factors;
      if (L.kind == "explicit") {
        body["leq"] = L.leq;
        if (!L.labels.empty()) body["labels"] = L.labels;
      }
      lats[name] = std::move(body);
    }
    j["lattices"] = std::move(lats);
    j["node_stalks"] = d.node_stalks;
    j["edge_stalks"] = d.edge_stalks;
    ordered_json rs = ordered_json::array();
    for (const auto& r : d.restrictions) {
      ordered_json body;
      body["node"] = r.node;
      body["edge"] = {r.edge.first, r.edge.second};
      body["kind"] = r.kind;
      if (r.kind == "relation") body["pairs"] = r.pairs;
      if (r.kind == "table") body["lower"] = r.lower;
      rs.push_back(std::move(body));
    }
    j["restrictions"] = std::move(rs);
  }

  ordered_json x0;
  x0["kind"] = d.x0_kind;
  if (d.x0_kind == "explicit") x0["values"] = d.x0_values;
  j["x0"] = std::move(x0);

  if (d.has_schedule) {
    ordered_json s;
    s["kind"] = d.schedule_kind;
    if (d.schedule_kind == "uniform1") s["seed"] = d.schedule_seed;
    if (d.schedule_kind == "periodic" || d.schedule_kind == "explicit")
      s["rounds"] = d.schedule_rounds;
    j["schedule"] = std::move(s);
  }

  return j.dump(2) + "\n";
}

namespace {

// Resolves lattice names to built lattices, following product factors
// recursively with cycle detection.
struct LatticeResolver {
  const std::map<std::string, SpecLattice>& defs;
  std::map<std::string, LatticePtr> built;
  std::set<std::string> in_progress;

  LatticePtr get(const std::string& name) {
    auto hit = built.find(name);
    if (hit != built.end()) return hit->second;
    auto def = defs.find(name);
    if (def == defs.end()) throw ParseError("unknown lattice name '" + name + "'");
    if (!in_progress.insert(name).second)
      throw ParseError("lattice '" + name + "' is defined in terms of itself");
    const SpecLattice& L = def->second;
    LatticePtr out;
    if (L.kind == "chain") {
      out = chain_lattice(L.n);
    } else if (L.kind == "partition") {
      out = partition_lattice(L.n);
    } else if (L.kind == "powerset") {
      out = powerset_lattice(L.ground);
    } else if (L.kind == "product") {
      std::vector<LatticePtr> fs;
      for (const auto& f : L.factors) fs.push_back(get(f));
      out = product_lattice(std::move(fs));
    } else {  // explicit
      const int m = static_cast<int>(L.leq.size());
      std::vector<std::uint8_t> flat;
      flat.reserve(static_cast<size_t>(m) * m);
      for (const auto& row : L.leq) {
        if (static_cast<int>(row.size()) != m)
          throw ParseError("lattice '" + name + "': 'leq' must be square");
        for (int v : row) flat.push_back(v ? 1 : 0);
      }
      out = lattice_from_leq(m, flat, L.labels);
    }
    in_progress.erase(name);
    built[name] = out;
    return out;
  }
};

int label_to_index(const FiniteLattice& L, const std::string& label, const std::string& where) {
  for (int x = 0; x < L.m; ++x)
    if (L.label(x) == label) return x;
  throw ParseError(where + ": no element labeled '" + label + "'");
}

BroadcastSequence schedule_from(const SheafSpecFile& d) {
  if (d.schedule_kind == "sync") return BroadcastSequence::synchronous();
  if (d.schedule_kind == "uniform1") return BroadcastSequence::uniform_single(d.schedule_seed);
  if (d.schedule_kind == "periodic") return BroadcastSequence::periodic(d.schedule_rounds);
  return BroadcastSequence::explicit_list(d.schedule_rounds);
}

}  // namespace

BuiltSpec build_spec(const SheafSpecFile& d) {
  BuiltSpec out;
  Graph g = Graph::simple(d.nodes, d.edges);

  if (d.has_kripke) {
    out.kripke = make_kripke_model(d.k_states, d.k_agents, d.k_atoms, d.k_valuation);
    out.sheaf = kripke_sheaf(*out.kripke, g);
  } else {
    LatticeResolver resolver{d.lattices, {}, {}};
    const int ne = static_cast<int>(g.edges.size());
    if (static_cast<int>(d.node_stalks.size()) != g.n)
      throw ParseError("node_stalks: need one lattice name per node");
    if (static_cast<int>(d.edge_stalks.size()) != ne)
      throw ParseError("edge_stalks: need one lattice name per edge");
    std::vector<LatticePtr> nodes, edges;
    for (const auto& s : d.node_stalks) nodes.push_back(resolver.get(s));
    for (const auto& s : d.edge_stalks) edges.push_back(resolver.get(s));

    std::vector<std::array<std::optional<GaloisConnection>, 2>> sides(ne);
    for (const auto& r : d.restrictions) {
      int e = g.edge_between(r.edge.first, r.edge.second);
      if (e < 0)
        throw ParseError("restrictions: no edge between " + std::to_string(r.edge.first) +
                         " and " + std::to_string(r.edge.second));
      int side;
      if (r.node == g.minus_end(e))
        side = 0;
      else if (r.node == g.plus_end(e))
        side = 1;
      else
        throw ParseError("restrictions: node " + std::to_string(r.node) +
                         " is not an endpoint of that edge");
      if (sides[e][side])
        throw ParseError("restrictions: duplicate entry for node " + std::to_string(r.node) +
                         " on that edge");
      const LatticePtr& dom = nodes[r.node];
      const LatticePtr& cod = edges[e];
      if (r.kind == "relation") {
        if (dom->kind != LatticeKind::powerset || cod->kind != LatticeKind::powerset)
          throw ParseError("restrictions: relation restrictions need powerset stalks");
        Relation rel;
        rel.nx = static_cast<int>(dom->ground.size());
        rel.ny = static_cast<int>(cod->ground.size());
        rel.tbl.assign(static_cast<size_t>(rel.nx) * rel.ny, 0);
        for (auto [a, b] : r.pairs) {
          if (a < 0 || a >= rel.nx || b < 0 || b >= rel.ny)
            throw ParseError("restrictions: relation pair out of range");
          rel.tbl[static_cast<size_t>(a) * rel.ny + b] = 1;
        }
        sides[e][side] = from_relation_covariant(rel, dom, cod);
      } else {
        std::vector<std::int32_t> tbl(r.lower.begin(), r.lower.end());
        sides[e][side] = connection_from_lower(make_monotone(dom, cod, std::move(tbl)));
      }
    }
    std::vector<std::array<GaloisConnection, 2>> restr;
    restr.reserve(ne);
    for (int e = 0; e < ne; ++e) {
      if (!sides[e][0] || !sides[e][1])
        throw ParseError("restrictions: edge (" + std::to_string(g.minus_end(e)) + "," +
                         std::to_string(g.plus_end(e)) + ") is missing a side");
      restr.push_back({*sides[e][0], *sides[e][1]});
    }
    out.sheaf = make_sheaf(std::move(g), std::move(nodes), std::move(edges), std::move(restr));
  }

  if (d.x0_kind == "top") {
    out.x0 = top_cochain(out.sheaf);
  } else if (d.x0_kind == "bottom") {
    out.x0 = bottom_cochain(out.sheaf);
  } else {
    if (static_cast<int>(d.x0_values.size()) != out.sheaf.g.n)
      throw ParseError("x0: need one element label per node");
    out.x0.resize(out.sheaf.g.n);
    for (int i = 0; i < out.sheaf.g.n; ++i)
      out.x0[i] = label_to_index(out.sheaf.F(i), d.x0_values[i], "x0");
  }

  if (d.has_schedule) out.schedule = schedule_from(d);
  return out;
}

}  // namespace latnet
