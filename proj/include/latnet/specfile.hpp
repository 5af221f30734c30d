#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "latnet/dynamics.hpp"
#include "latnet/kripke.hpp"
#include "latnet/sheaf.hpp"

namespace latnet {

// A sheaf description as a strict JSON document. Two shapes are accepted:
//
//  * explicit: "lattices" (named; kinds chain/powerset/partition/product/
//    explicit), "graph" {nodes, edges}, "node_stalks"/"edge_stalks" (lattice
//    names), and "restrictions" — one entry per (node, edge) incidence,
//    either {"kind":"relation","pairs":[[x,y],...]} between the powerset
//    grounds, or {"kind":"table","lower":[...]} giving the lower adjoint
//    (the upper adjoint is derived, which validates join preservation);
//
//  * possible-worlds: a "kripke" object {states, agents (per-agent pair
//    lists), atoms, valuation} plus "graph"; every stalk is the shared event
//    lattice and restrictions are the agents' adjoint pairs.
//
// Optional in both: "x0" ({"kind":"top"|"bottom"} or {"kind":"explicit",
// "values":[element labels]}, default top) and "schedule" ({"kind":"sync"} |
// {"kind":"uniform1","seed":N} | {"kind":"periodic"|"explicit","rounds":
// [[node,...],...]}).
struct SpecLattice {
  std::string kind;                   // chain|powerset|partition|product|explicit
  int n = 0;                          // chain/partition
  std::vector<std::string> ground;    // powerset
  std::vector<std::string> factors;   // product: names of other lattices
  std::vector<std::vector<int>> leq;  // explicit: m rows of m 0/1 flags
  std::vector<std::string> labels;    // explicit, optional
};

struct SpecRestriction {
  int node = -1;
  std::pair<int, int> edge{-1, -1};
  std::string kind;                        // relation|table
  std::vector<std::pair<int, int>> pairs;  // relation
  std::vector<int> lower;                  // table
};

struct SheafSpecFile {
  std::map<std::string, SpecLattice> lattices;
  int nodes = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<std::string> node_stalks;
  std::vector<std::string> edge_stalks;
  std::vector<SpecRestriction> restrictions;

  std::string x0_kind = "top";          // top|bottom|explicit
  std::vector<std::string> x0_values;   // explicit: one label per node

  bool has_kripke = false;
  std::vector<std::string> k_states;
  std::vector<std::vector<std::pair<int, int>>> k_agents;
  std::vector<std::string> k_atoms;
  std::vector<std::vector<std::string>> k_valuation;

  bool has_schedule = false;
  std::string schedule_kind;  // sync|uniform1|periodic|explicit
  std::uint64_t schedule_seed = 0;
  std::vector<std::vector<int>> schedule_rounds;
};

// Parsing throws ParseError with a diagnostic; serialize emits the canonical
// form (fixed key order, two-space indent), and parse(serialize(d)) == d.
SheafSpecFile parse_spec_text(const std::string& text);
SheafSpecFile load_spec_file(const std::string& path);
std::string serialize_spec(const SheafSpecFile& doc);

// The document realized: a validated sheaf, the model when one was given,
// the initial cochain (default top), and the schedule when one was given.
struct BuiltSpec {
  TarskiSheaf sheaf;
  std::optional<KripkeModel> kripke;
  Cochain0 x0;
  std::optional<BroadcastSequence> schedule;
};
BuiltSpec build_spec(const SheafSpecFile& doc);

}  // namespace latnet
