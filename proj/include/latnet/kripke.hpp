#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "latnet/galois.hpp"
#include "latnet/sheaf.hpp"

namespace latnet {

// ----- models ------------------------------------------------------------

struct RelationFlags {
  bool reflexive = false;
  bool transitive = false;
  bool symmetric = false;
  bool antisymmetric = false;
  bool serial = false;
  bool euclidean = false;
  bool connex = false;
};

// Flags computed from successor masks (succ[x] = bitmask of y with x R y).
RelationFlags relation_properties(const std::vector<uint32_t>& succ, int n_states);

// A multi-agent possible-worlds model: a state set, one accessibility
// relation per agent (successor masks), and an atomic-proposition valuation.
// State count is capped at 12 so events fit the powerset-lattice guard.
struct KripkeModel {
  std::vector<std::string> states;
  std::vector<std::vector<uint32_t>> succ;  // [agent][state] -> successor mask
  std::vector<std::string> atoms;
  std::vector<uint32_t> atom_mask;  // per atom: mask of states where it holds

  int n_states() const { return static_cast<int>(states.size()); }
  int n_agents() const { return static_cast<int>(succ.size()); }
  uint32_t all_states() const { return (1u << states.size()) - 1; }
  int atom_index(const std::string& name) const;  // UnknownAtom
};

// Validates shapes, state/atom name uniqueness, relation pairs, and the
// valuation (given per state as a list of atom names).
KripkeModel make_kripke_model(std::vector<std::string> states,
                              std::vector<std::vector<std::pair<int, int>>> relations,
                              std::vector<std::string> atoms,
                              std::vector<std::vector<std::string>> valuation);

// Three agents on a path graph over states {r,s,t} with hand-picked
// accessibility relations; exercised by the demo subcommand and tests.
KripkeModel three_agent_example_model();
Graph three_agent_example_graph();

// ----- formulas ------------------------------------------------------------

// Core AST: truth, atoms, negation, binary conjunction, and one knowledge
// modality per agent. Disjunction/implication/possibility/mutual knowledge
// are provided as derived constructors that desugar into the core.
struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  enum class Kind { truth, atom, negation, conjunction, know };
  Kind kind = Kind::truth;
  std::string name;     // atom
  int agent = -1;       // know
  FormulaPtr a, b;      // children (negation/know use a)
};

FormulaPtr f_true();
FormulaPtr f_atom(std::string name);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_and(const std::vector<FormulaPtr>& parts);  // empty -> true
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_know(int agent, FormulaPtr a);
FormulaPtr f_possible(int agent, FormulaPtr a);               // not K_i not
FormulaPtr f_everyone(const std::vector<int>& agents, const FormulaPtr& a);

// Prefix text syntax:
//   formula := "true" | ATOM | "(" "not" f ")" | "(" "and" f f ... ")"
//            | "(" "or" f f ... ")" | "(" "implies" f f ")"
//            | "(" "K" AGENT f ")" | "(" "P" AGENT f ")" | "(" "E" AGENT... f ")"
// where AGENT is a nonnegative integer and ATOM any other bare token,
// e.g. "(and p (K 1 (not q)))". Derived operators are desugared while
// parsing, so formatting prints core syntax only.
FormulaPtr parse_formula(const std::string& text);  // ParseError
std::string format_formula(const FormulaPtr& f);

// ----- evaluation ----------------------------------------------------------

// Direct recursive satisfaction at one state (the knowledge clause walks
// accessibility successors), and the compositional intension evaluator;
// their agreement is the content of the semantics-preservation laws.
bool satisfies(const KripkeModel& m, int state, const FormulaPtr& f);
uint32_t intension(const KripkeModel& m, const FormulaPtr& f);

// Modal operators on event masks. know_exists is the direct image (the left
// adjoint of know_forall); possible_diamond is the intension of "not K not",
// the image along the converse relation. The latter two coincide exactly
// when the relation is symmetric.
uint32_t know_forall(const KripkeModel& m, int agent, uint32_t e);
uint32_t know_exists(const KripkeModel& m, int agent, uint32_t e);
uint32_t possible_diamond(const KripkeModel& m, int agent, uint32_t e);

// Group-knowledge evaluators on event masks: everyone = meet of know_forall;
// distributed pools evidence through the intersection relation; common uses
// the transitive closure of the union relation.
uint32_t everyone_intension(const KripkeModel& m, const std::vector<int>& agents, uint32_t e);
uint32_t distributed_knowledge_intension(const KripkeModel& m, const std::vector<int>& agents,
                                         uint32_t e);
uint32_t common_knowledge_intension(const KripkeModel& m, const std::vector<int>& agents,
                                    uint32_t e);

// ----- sheaf-side semantics -------------------------------------------------

// Assignments of one event per node.
using EventTuple = std::vector<uint32_t>;

// The powerset of states, labeled with the state names.
LatticePtr event_lattice(const KripkeModel& m);

// The adjoint pair (know_exists, know_forall) for one agent, on a fresh or
// a shared event lattice.
GaloisConnection kripke_connection(const KripkeModel& m, int agent);
GaloisConnection kripke_connection(const KripkeModel& m, int agent, const LatticePtr& events);

// One node per agent; every stalk is the (shared) event lattice and the
// restriction at (i <| ij) is agent i's connection.
TarskiSheaf kripke_sheaf(const KripkeModel& m, Graph g);

// (Le)_i = intersection over neighbors j of K_i-forall(K_j-exists(e_j)),
// isolated nodes -> all states; agrees with the Tarski Laplacian of
// kripke_sheaf but works on masks directly.
EventTuple kripke_laplacian(const KripkeModel& m, const Graph& g, const EventTuple& e);

// True iff the tuple of intensions is a global section (equal know_exists
// images across every edge).
bool epistemic_section_check(const KripkeModel& m, const Graph& g,
                             const std::vector<FormulaPtr>& phis);

// Formula-level consensus characterizations: equal intensions of
// "K_i not phi_i" across edges, and of "K_i phi_i". The first coincides with
// the section property exactly when the relations are symmetric (then the
// direct image along the relation equals the image along its converse). The
// second needs the relations to also be serial and functional, because only
// then does know_forall commute with complement. The gaps on more general
// relations are deliberate; the regression tests pin witnesses for both.
bool section_formula_characterization(const KripkeModel& m, const Graph& g,
                                      const std::vector<FormulaPtr>& phis);
bool section_formula_characterization_serial(const KripkeModel& m, const Graph& g,
                                             const std::vector<FormulaPtr>& phis);

// ----- diffusive knowledge ---------------------------------------------------

// The formula "and over neighbors j of N(i): K_i not K_j not phi_j"
// (empty neighborhood -> true).
FormulaPtr syntactic_laplacian(const Graph& g, int i, const std::vector<FormulaPtr>& phis);

// k-fold iterate (k >= 1) of phi -> and over i in A of the syntactic
// Laplacian at i with the constant tuple phi.
FormulaPtr diffusive(const Graph& g, const std::vector<int>& agents, const FormulaPtr& phi,
                     int k);

// Intension of the infinite conjunction over all k >= 1 of the iterates,
// computed at the event level with cycle detection (the finite state space
// makes the iterate sequence eventually periodic).
uint32_t diffusive_omega_intension(const KripkeModel& m, const Graph& g,
                                   const std::vector<int>& agents, const FormulaPtr& phi);

}  // namespace latnet
