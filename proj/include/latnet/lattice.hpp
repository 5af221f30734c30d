#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "latnet/errors.hpp"

namespace latnet {

class FiniteLattice;
using LatticePtr = std::shared_ptr<const FiniteLattice>;

// Construction flavor. Carried along so downstream code can recover the
// intended semantics of element indices (e.g. powerset indices are bitmasks
// over `ground`, which is what makes the symmetric-difference metric and
// subset-style labels meaningful).
enum class LatticeKind { generic, chain, powerset, partition, product };

// Hard cap on explicit-table lattices: leq is m*m bytes and meet/join are
// m*m ints each, so this keeps a single lattice under ~150 MB.
inline constexpr int kMaxLatticeSize = 4096;

// A finite complete lattice with explicit order and operation tables.
// Elements are dense indices 0..m-1. Instances are immutable after
// construction and shared via LatticePtr (sheaves assign one lattice to many
// stalks), which also makes them safe to read from parallel workers.
class FiniteLattice {
 public:
  int m = 0;
  int bot = -1;
  int top = -1;
  LatticeKind kind = LatticeKind::generic;
  // True when element indices are bitmasks over `ground` (powersets and
  // their opposites).
  bool mask_elements = false;

  std::vector<std::uint8_t> leq;   // m*m, row-major: leq[a*m+b] = (a <= b)
  std::vector<std::int32_t> meet;  // m*m greatest-lower-bound table
  std::vector<std::int32_t> join;  // m*m least-upper-bound table

  std::vector<std::string> labels;  // size m
  std::vector<std::string> ground;  // powerset only: ground-element names

  // Product payload (kind == product): factor lattices and mixed-radix
  // strides with factor 0 the most significant digit.
  std::vector<LatticePtr> factors;
  std::vector<int> strides;

  bool le(int a, int b) const { return leq[std::size_t(a) * m + b] != 0; }
  bool lt(int a, int b) const { return a != b && le(a, b); }
  int meet_of(int a, int b) const { return meet[std::size_t(a) * m + b]; }
  int join_of(int a, int b) const { return join[std::size_t(a) * m + b]; }

  // Iterated operations with the complete-lattice conventions for the empty
  // case: an empty meet is top, an empty join is bot.
  int meet_all(const std::vector<int>& xs) const {
    int acc = top;
    for (int x : xs) acc = meet_of(acc, x);
    return acc;
  }
  int join_all(const std::vector<int>& xs) const {
    int acc = bot;
    for (int x : xs) acc = join_of(acc, x);
    return acc;
  }

  const std::string& label(int x) const { return labels[x]; }
};

// --- Constructors. All validate their input and return immutable values. ---

// Build from an explicit order table. Validates that leq is a partial order
// (NotPartialOrder) in which every pair has a meet and a join and bottom/top
// exist (NotALattice). Guard: m <= kMaxLatticeSize (TooLarge).
LatticePtr lattice_from_leq(int m, const std::vector<std::uint8_t>& leq,
                            std::vector<std::string> labels = {});

// Total order 0 < 1 < ... < n-1.
LatticePtr chain_lattice(int n);

// Powerset of a named ground set; element index == bitmask over ground
// (bit k = ground[k]). Guard: |ground| <= 12 so the explicit tables fit.
LatticePtr powerset_lattice(const std::vector<std::string>& ground);
LatticePtr powerset_lattice(int n_ground);  // ground named "0","1",...

// Partitions of {1..n} ordered by refinement (finer <= coarser), so bottom
// is all-singletons and top is the single block. Canonical element labels
// list blocks sorted by least member, members sorted ("12|3"). Guard n <= 7.
LatticePtr partition_lattice(int n);

// Componentwise product; factor 0 is the most significant mixed-radix digit.
// Guard: total size <= kMaxLatticeSize.
LatticePtr product_lattice(std::vector<LatticePtr> factor_lattices);
std::vector<int> product_decode(const FiniteLattice& prod, int x);
int product_encode(const FiniteLattice& prod, const std::vector<int>& comps);

// Same carrier with the order reversed (meet and join swap, as do bot/top).
LatticePtr opposite_lattice(const LatticePtr& base);

// --- Inspection ---

// Structural identity (same order and operation tables). Cheap pointer test
// first; used wherever two ends of a map must live in "the same" lattice.
bool lattice_same(const FiniteLattice& a, const FiniteLattice& b);

// Full audit of the lattice axioms *and* the order/algebra equivalence
// (a <= b iff a∧b = a iff a∨b = b), absorption, associativity, idempotence,
// commutativity, and bot/top identities. Throws on the first violation.
// Associativity is cubic, so this is guarded to m <= 512 (TooLarge).
void check_lattice_laws(const FiniteLattice& L);

// x is join-irreducible iff x differs from the join of everything strictly
// below it (so bot is excluded); dually for meet-irreducible.
std::vector<int> join_irreducibles(const FiniteLattice& L);
std::vector<int> meet_irreducibles(const FiniteLattice& L);

// Exhaustive distributivity test (cubic; guard m <= 512).
bool is_distributive(const FiniteLattice& L);

// Hasse diagram as (lower, upper) cover pairs, lexicographically ordered.
std::vector<std::pair<int, int>> cover_pairs(const FiniteLattice& L);

// Longest-chain height of each element above bot, and of the whole lattice.
std::vector<int> element_heights(const FiniteLattice& L);
int lattice_height(const FiniteLattice& L);

struct RankGrading {
  bool graded = false;       // every cover step raises the rank by exactly 1
  std::vector<int> rank;     // longest-chain heights (valid either way)
};
RankGrading rank_grading(const FiniteLattice& L);

// Index permutation listing elements in a canonical linear extension of the
// order: ascending height, ties by index. Used for matrix presentations.
std::vector<int> linear_extension(const FiniteLattice& L);

// All-pairs shortest-path distances in the undirected Hasse diagram
// (row-major m*m). Hasse diagrams of lattices are connected, so every entry
// is finite.
std::vector<std::int32_t> hasse_distances(const FiniteLattice& L);

// --- Posets and Birkhoff duality ---

struct Poset {
  int m = 0;
  std::vector<std::uint8_t> leq;
  std::vector<std::string> labels;
  bool le(int a, int b) const { return leq[std::size_t(a) * m + b] != 0; }
};

// Validates reflexivity, antisymmetry, transitivity (NotPartialOrder).
Poset make_poset(int m, const std::vector<std::uint8_t>& leq,
                 std::vector<std::string> labels = {});

struct DownsetLattice {
  LatticePtr lattice;
  std::vector<std::uint32_t> downsets;  // element i <-> subset mask of poset
};

// Lattice of down-closed subsets ordered by inclusion (always distributive).
// Guards: poset size <= 20, downset count <= kMaxLatticeSize.
DownsetLattice downset_lattice(const Poset& p);

// Birkhoff representation: true iff L is isomorphic, via
// x -> {join-irreducible j : j <= x}, to the downset lattice of its
// join-irreducible subposet. Holds exactly for distributive L.
bool birkhoff_check(const FiniteLattice& L);

// --- Monotone maps ---

struct MonotoneMap {
  LatticePtr dom, cod;
  std::vector<std::int32_t> tbl;  // image table, size dom->m
  int operator()(int x) const { return tbl[x]; }
};

// Validates order preservation (NotMonotone) and the image range
// (ShapeMismatch).
MonotoneMap make_monotone(LatticePtr dom, LatticePtr cod,
                          std::vector<std::int32_t> tbl);
MonotoneMap identity_map(LatticePtr L);

// g after f; requires f.cod and g.dom to be the same lattice (ShapeMismatch).
MonotoneMap compose(const MonotoneMap& g, const MonotoneMap& f);

bool maps_equal(const MonotoneMap& f, const MonotoneMap& g);

// Pre-fixed points (f(x) <= x), post-fixed points (f(x) >= x), fixed points,
// and the extreme fixed points obtained by iterating f from bot / top. For
// monotone f on a complete lattice the fixed set is nonempty and the
// iterations reach its least / greatest member.
struct FixedPointSets {
  std::vector<int> prefix;
  std::vector<int> suffix;
  std::vector<int> fixed;
  int least_fixed = -1;
  int greatest_fixed = -1;
};
FixedPointSets fixed_point_sets(const MonotoneMap& f);

}  // namespace latnet
