#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "latnet/sheaf.hpp"

namespace latnet {

// ----- operators --------------------------------------------------------

// (Lx)_i = meet over neighbors j of up(i, ij, down(j, ij, x_j)); isolated
// nodes get top (empty meet). Monotone; its suffix points are exactly the
// global sections.
Cochain0 tarski_laplacian(const TarskiSheaf& s, const Cochain0& x);

// Schedule-restricted variant: only neighbors in `fired` contribute to the
// meet (empty contribution = top). With fired = all nodes this is the
// operator above.
Cochain0 tarski_laplacian_restricted(const TarskiSheaf& s, const Cochain0& x,
                                     const std::vector<int>& fired);

// (Ex)_i = meet over incident edges e of up(i, e, down(i, e, x_i)): a
// closure-style operator (inflationary, idempotent, monotone) that agrees
// with L on sections.
Cochain0 closure_E(const TarskiSheaf& s, const Cochain0& x);

// ----- Dirichlet energy --------------------------------------------------

// Edge metric for the energy: symmetric-difference cardinality on stalks
// carrying subset masks, shortest-path distance in the undirected Hasse
// diagram otherwise. `automatic` picks per edge stalk; asking for hamming
// on a stalk without masks raises MetricUndefined.
enum class EdgeMetric { automatic, hamming, hasse };

// V(x) = sum over edges of d(down(i,e,x_i), down(j,e,x_j)); zero exactly on
// sections.
double dirichlet_energy(const TarskiSheaf& s, const Cochain0& x,
                        EdgeMetric metric = EdgeMetric::automatic);

// ----- heat flow ---------------------------------------------------------

struct HeatFlowResult {
  std::vector<Cochain0> trajectory;  // trajectory[0] = x0, strictly decreasing
  bool reached_fixed_point = false;
  const Cochain0& final_state() const { return trajectory.back(); }
  long long steps() const { return static_cast<long long>(trajectory.size()) - 1; }
};

// Iterates x <- L(x) meet x to the fixed point (always reached: the
// trajectory is a strictly descending chain, so its length is at most
// 1 + sum of stalk heights; max_steps < 0 means that bound). The fixed
// point is a global section.
HeatFlowResult heat_flow(const TarskiSheaf& s, Cochain0 x0, long long max_steps = -1);

// ----- broadcast schedules ----------------------------------------------

enum class ScheduleKind { synchronous, uniform_single, periodic, explicit_list };

// A value-type description of who fires when; gossip keeps the cursor/PRNG
// state itself so a sequence can be reused across runs.
struct BroadcastSequence {
  ScheduleKind kind = ScheduleKind::synchronous;
  uint64_t seed = 0;                     // uniform_single
  std::vector<std::vector<int>> rounds;  // periodic (cycled) / explicit_list (finite)

  // Liveness: every node fires within every window of the declared period
  // (for explicit lists, within the list itself). Synchronous and seeded
  // uniform draws are reported live.
  bool is_live(int n) const;

  static BroadcastSequence synchronous();
  static BroadcastSequence uniform_single(uint64_t seed);
  static BroadcastSequence periodic(std::vector<std::vector<int>> rounds);
  static BroadcastSequence explicit_list(std::vector<std::vector<int>> rounds);
};

// ----- gossip ------------------------------------------------------------

struct GossipTraceRow {
  long long t = 0;
  std::vector<int> fired;        // empty for the initial row and synchronous rounds
  std::optional<double> energy;  // present when energy tracking is on
  Cochain0 state;
};

struct GossipOptions {
  long long max_steps = 1'000'000;
  bool track_energy = true;
  EdgeMetric metric = EdgeMetric::automatic;
};

struct GossipResult {
  std::vector<GossipTraceRow> trace;  // row 0 is the initial state
  bool converged = false;             // quiesced: certified fixed point / section
  const Cochain0& final_state() const { return trace.back().state; }
  long long steps() const { return static_cast<long long>(trace.size()) - 1; }
};

// Asynchronous fixed-point iteration: at each step the scheduled nodes
// broadcast their lower images; every node meets its value with the upper
// pullbacks of what it heard (snapshot semantics, so a synchronous schedule
// reproduces heat flow step for step). Terminates when every node has fired
// since the last state change with no change — which certifies the state is
// a global section — or when the schedule/step budget runs out (converged
// stays false and the partial trace is returned).
GossipResult gossip(const TarskiSheaf& s, Cochain0 x0, const BroadcastSequence& schedule,
                    GossipOptions opt = {});

// ----- consensus specializations ----------------------------------------

struct ConsensusResult {
  std::vector<int> x;
  int rounds = 0;  // synchronous rounds until no further change
};

// x_i <- x_i meet (meet of neighbor values); on a connected graph every node
// reaches the global meet within diam(G) rounds. join_consensus is the dual.
ConsensusResult meet_consensus(const Graph& g, const LatticePtr& L, std::vector<int> x0);
ConsensusResult join_consensus(const Graph& g, const LatticePtr& L, std::vector<int> x0);

// ----- Helmholtzian ------------------------------------------------------

// Edge-space operator: for e = (i,j),
//   (Hy)_e = (join over other edges e' = (i,j') at i of down(i,e, up(i,e', y_e')))
//        join (join over other edges e'' = (i',j) at j of down(j,e, up(j,e'', y_e''))),
// with empty joins = bot (a single isolated edge maps to bot).
Cochain1 helmholtzian(const TarskiSheaf& s, const Cochain1& y);

// Exploratory comparison of {y | H(y) <= y componentwise} against the
// coequalizer set from h1_bruteforce. The relationship is an open question,
// so this only reports; nothing is asserted.
struct ConjectureReport {
  long long cochain_count = 0;
  long long prefix_count = 0;
  long long h1_count = 0;
  bool equal = false;
  std::vector<Cochain1> prefix_not_h1;  // up to 8 samples each way
  std::vector<Cochain1> h1_not_prefix;
};
ConjectureReport conjecture_report(const TarskiSheaf& s, Exec mode = Exec::parallel);

// ----- Hodge-Tarski check ------------------------------------------------

// Enumerates every 0-cochain and verifies the three descriptions of the
// "harmonic" states coincide: sections, suffix points (x <= Lx), and fixed
// points of L meet id. Returns the first disagreeing cochain if any.
struct HodgeCheck {
  bool ok = false;
  long long section_count = 0;
  long long suffix_count = 0;
  long long fixed_count = 0;
  std::optional<Cochain0> witness;
};
HodgeCheck check_hodge_tarski(const TarskiSheaf& s, Exec mode = Exec::parallel);

}  // namespace latnet
