#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "latnet/lattice.hpp"

namespace latnet {

// An adjoint pair between complete lattices: lower : K -> L preserves joins,
// upper : L -> K preserves meets, and lower(x) <= y iff x <= upper(y).
struct GaloisConnection {
  MonotoneMap lower;
  MonotoneMap upper;

  const FiniteLattice& dom() const { return *lower.dom; }
  const FiniteLattice& cod() const { return *lower.cod; }
};

// Counterexample to the adjunction equivalence, if any: an (x, y) pair where
// lower(x) <= y and x <= upper(y) disagree.
struct AdjunctionWitness {
  bool ok = true;
  int x = -1;
  int y = -1;
};

// Exhaustive check of the defining equivalence over dom x cod.
AdjunctionWitness validate_connection(const GaloisConnection& c);

// Validates shapes and the adjunction (InvalidConnection with the witness).
GaloisConnection make_connection(MonotoneMap lower, MonotoneMap upper);

// Adjoint function theorem, computationally: the upper adjoint of a
// join-preserving f is f*(y) = join{ x : f(x) <= y }. Join preservation
// (binary joins plus f(bot) = bot) is checked exhaustively first
// (NotJoinPreserving). Dually for coadjoint_of (NotMeetPreserving).
MonotoneMap adjoint_of(const MonotoneMap& f);
MonotoneMap coadjoint_of(const MonotoneMap& g);

// Connection synthesized from one side via the adjoint function theorem.
GaloisConnection connection_from_lower(MonotoneMap lower);
GaloisConnection connection_from_upper(MonotoneMap upper);

GaloisConnection identity_connection(LatticePtr L);

// Composite K -> L -> M: lowers compose left-to-right, uppers the other way.
GaloisConnection compose_connections(const GaloisConnection& g,
                                     const GaloisConnection& f);

// upper∘lower : K -> K (inflationary, idempotent, monotone) and its dual.
MonotoneMap closure_of(const GaloisConnection& c);
MonotoneMap coclosure_of(const GaloisConnection& c);

// --- Connections from binary relations ---

// A relation R ⊆ X x Y as an explicit incidence table.
struct Relation {
  int nx = 0, ny = 0;
  std::vector<std::uint8_t> tbl;  // row-major nx*ny

  bool at(int x, int y) const { return tbl[std::size_t(x) * ny + y] != 0; }
  static Relation from_pairs(int nx, int ny,
                             const std::vector<std::pair<int, int>>& pairs);
};

// Covariant pair on powersets: lower U = R∃(U) = { y : some x in U has xRy },
// upper V = R∀(V) = { x : every y with xRy lies in V }. Ground names label
// the powerset lattices. Guard: nx, ny <= 12 (powerset table guard).
GaloisConnection from_relation_covariant(
    const Relation& r, const std::vector<std::string>& x_names = {},
    const std::vector<std::string>& y_names = {});

// Same maps built over caller-supplied powerset lattices, so many
// connections can share one set of tables (the sheaf builders rely on this).
GaloisConnection from_relation_covariant(const Relation& r, const LatticePtr& px,
                                         const LatticePtr& py);

// Contravariant pair stored as a covariant connection into the opposite
// lattice: lower U = R↑(U) = { y : every x in U has xRy } lands in ℘(Y)^op,
// upper V = R↓(V) = { x : every y in V has xRy }.
GaloisConnection from_relation_contravariant(
    const Relation& r, const std::vector<std::string>& x_names = {},
    const std::vector<std::string>& y_names = {});

// --- Concept lattices ---

// A concept of R is a pair (objects, attributes) with R↑(objects) =
// attributes and R↓(attributes) = objects; concepts ordered by object-set
// inclusion form a complete lattice.
struct FormalConcept {
  std::vector<int> objects;
  std::vector<int> attributes;
};

struct ConceptLattice {
  LatticePtr lattice;                   // element i <-> concepts[i]
  std::vector<FormalConcept> concepts;  // ordered compatibly with the lattice
};

// Enumerates concepts by closing the attribute-column extents under
// intersection. Guard: nx*ny <= 400 (TooLarge), and the concept count must
// fit the lattice table guard.
ConceptLattice concept_lattice(const Relation& r);

}  // namespace latnet
