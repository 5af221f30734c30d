#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "latnet/exec.hpp"
#include "latnet/galois.hpp"
#include "latnet/graph.hpp"

namespace latnet {

// 0-cochains assign an element of the node stalk to every node; 1-cochains
// an element of the edge stalk to every edge.
using Cochain0 = std::vector<int>;
using Cochain1 = std::vector<int>;

// A cellular sheaf of complete lattices on a simple graph, with one adjoint
// pair per node-edge incidence: lower (join-preserving) maps the node stalk
// into the edge stalk, upper is its adjoint back.
struct TarskiSheaf {
  Graph g;
  std::vector<LatticePtr> node_stalk;                 // per node
  std::vector<LatticePtr> edge_stalk;                 // per edge
  std::vector<std::array<GaloisConnection, 2>> restr; // per edge: [0]=minus end, [1]=plus end

  const FiniteLattice& F(int node) const { return *node_stalk[node]; }
  const FiniteLattice& Fe(int e) const { return *edge_stalk[e]; }

  // The adjoint pair attached to the incidence (node <| edge).
  const GaloisConnection& restriction(int node, int edge) const {
    return restr[edge][node == g.plus_end(edge) ? 1 : 0];
  }
  // Shorthands: lower / upper restriction applied to an element.
  int down(int node, int edge, int x) const { return restriction(node, edge).lower(x); }
  int up(int node, int edge, int y) const { return restriction(node, edge).upper(y); }
};

// Validates stalk shapes and every adjunction (InvalidConnection names the
// incidence).
TarskiSheaf make_sheaf(Graph g, std::vector<LatticePtr> node_stalks,
                       std::vector<LatticePtr> edge_stalks,
                       std::vector<std::array<GaloisConnection, 2>> restrictions);

// Every stalk is L and every restriction the identity pair.
TarskiSheaf constant_sheaf(Graph g, const LatticePtr& L);

// Componentwise order and operations on 0-cochains.
bool cochain_le(const TarskiSheaf& s, const Cochain0& a, const Cochain0& b);
Cochain0 cochain_meet(const TarskiSheaf& s, const Cochain0& a, const Cochain0& b);
Cochain0 cochain_join(const TarskiSheaf& s, const Cochain0& a, const Cochain0& b);
Cochain0 top_cochain(const TarskiSheaf& s);
Cochain0 bottom_cochain(const TarskiSheaf& s);

// x is a section when both coboundary images agree on every edge:
// down(i, e, x_i) == down(j, e, x_j) for e = (i, j).
bool is_section(const TarskiSheaf& s, const Cochain0& x);

// Coboundary pair C0 -> C1 ((delta-)_e reads the minus end, (delta+)_e the
// plus end) and their componentwise upper adjoints C1 -> C0.
Cochain1 delta_minus(const TarskiSheaf& s, const Cochain0& x);
Cochain1 delta_plus(const TarskiSheaf& s, const Cochain0& x);
Cochain0 delta_minus_upper(const TarskiSheaf& s, const Cochain1& y);
Cochain0 delta_plus_upper(const TarskiSheaf& s, const Cochain1& y);

// Number of 0-/1-cochains (products of stalk sizes).
long long cochain0_count(const TarskiSheaf& s);
long long cochain1_count(const TarskiSheaf& s);

// Exhaustive global-section search, in lexicographic order (node 0 most
// significant). Guard: at most 10^6 cochains (TooLarge). When the section
// count is small enough (<= 1024) the result is audited against the
// structure theory: the bottom cochain is a section and sections are closed
// under componentwise join, which makes them a complete lattice even though
// meets generally differ from the ambient ones.
std::vector<Cochain0> sections_bruteforce(const TarskiSheaf& s, Exec mode = Exec::parallel);

// Exhaustive coequalizer search: the 1-cochains where the upper adjoints of
// the two coboundaries agree. The set presents the quotient invariant with
// the *opposite* of the componentwise order (h1_le below); same guard.
std::vector<Cochain1> h1_bruteforce(const TarskiSheaf& s, Exec mode = Exec::parallel);
bool h1_le(const TarskiSheaf& s, const Cochain1& a, const Cochain1& b);

// Transport along a node path: each step applies lower at the source then
// upper at the target of the traversed edge. NotAPath on bad input.
int transport(const TarskiSheaf& s, const std::vector<int>& path, int x);
MonotoneMap transport_map(const TarskiSheaf& s, const std::vector<int>& path);

// All distinct transport endomaps of closed walks at base with length
// <= max_len (the empty walk contributes the identity). Closed under
// composition within the length budget. Guard: max_len <= 8.
std::vector<MonotoneMap> holonomy(const TarskiSheaf& s, int base, int max_len);

}  // namespace latnet
