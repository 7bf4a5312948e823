#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "amcdes/budget.hpp"
#include "amcdes/cgses.hpp"
#include "amcdes/formula.hpp"
#include "amcdes/games.hpp"
#include "amcdes/onestep.hpp"
#include "amcdes/util.hpp"

namespace amcdes {

// ---------------------------------------------------------------------------
// Branch letters and trace tracking.
//
// A tableau play over a closure emits one letter per proof step. A trace is a
// walk through the closure graph that follows those letters; a play is lost
// for the prover iff some trace unfolds a least fixpoint infinitely often
// without a greater greatest fixpoint recurring, i.e. iff the maximum closure
// priority seen infinitely often along some trace is odd.
// ---------------------------------------------------------------------------

struct BranchLetter {
  enum class Kind { AndExp, OrLeft, OrRight, Unfold, Modal };
  Kind kind = Kind::AndExp;
  int target = -1;   // closure index of the expanded item (non-modal kinds)
  Bitset cont;       // Modal: closure indices of the continued bodies

  std::string encode() const;
  bool operator<(const BranchLetter& o) const {
    if (kind != o.kind) return kind < o.kind;
    if (target != o.target) return target < o.target;
    return cont < o.cont;
  }
};

// Trace successors of closure item `s` under a letter. Expansion letters move
// only the expanded item; a Modal letter continues exactly the modal items
// whose body is listed in `cont` and ends every other trace.
std::vector<int> traceSuccs(const Closure& cl, int s, const BranchLetter& letter);

// ---------------------------------------------------------------------------
// Generic word automata over explicit alphabets. Both kinds read infinite
// words and accept iff the limit superior of the priorities seen is odd; for
// the nondeterministic kind some run must witness this, and a run dies (and
// witnesses nothing) when it reaches a state with no transition.
// ---------------------------------------------------------------------------

struct GenericNPA {
  int nStates = 0;
  int nLetters = 0;
  std::vector<int> initial;                        // set of initial states
  std::vector<int> priority;                       // per state
  std::vector<std::vector<std::vector<int>>> delta;  // [state][letter] -> succs

  int maxPriority() const;
  bool deterministic() const;  // at most one initial state and one successor per letter
  // Acceptance of the ultimately periodic word stem · period^ω, decided on
  // the product of states and word positions.
  bool acceptsLasso(const std::vector<int>& stem, const std::vector<int>& period) const;
};

struct GenericDPA {
  int nStates = 0;
  int nLetters = 0;
  int initial = 0;
  std::vector<std::vector<int>> trans;  // total: [state][letter] -> state
  std::vector<std::vector<int>> pri;    // per transition

  int maxPriority() const;
  // Acceptance by simulation: run the stem, then iterate the period until a
  // state repeats at a pass boundary, and inspect the repeating passes.
  bool acceptsLasso(const std::vector<int>& stem, const std::vector<int>& period) const;
};

// Determinization preserving the accepted language. Deterministic inputs are
// completed with a rejecting sink; automata whose cyclic strongly connected
// components are priority-parity-uniform go through a breakpoint subset
// construction; everything else goes through committed-run Büchi copies,
// history trees, and an index appearance record. Throws BudgetExceeded when
// more than budgets.detStates states get built.
GenericDPA determinize(const GenericNPA& a, const Budgets& budgets = {});

// ---------------------------------------------------------------------------
// Deterministic trace tracking over a closure. States are built lazily
// because modal letters depend on rule matching; the same constructions as in
// determinize back it (breakpoint when the closure is alternation free, the
// general path otherwise). step() returns the successor state id and the
// priority the transition contributes to the tableau game, under the game's
// max-even convention: the prover wins a play iff the maximum transition
// priority seen infinitely often is even, which holds iff no trace is bad.
// ---------------------------------------------------------------------------

class DetTracker {
 public:
  enum class Mode { Breakpoint, General };

  DetTracker(const Closure& cl, const Budgets& budgets);
  ~DetTracker();
  DetTracker(const DetTracker&) = delete;
  DetTracker& operator=(const DetTracker&) = delete;

  Mode mode() const { return mode_; }
  int initialState();
  std::pair<int, int> step(int det, const BranchLetter& letter);  // (next, priority)
  int numStates() const;

 private:
  struct Impl;
  Impl* impl_;
  Mode mode_;
};

// ---------------------------------------------------------------------------
// Guarding. Rewrites every fixpoint ηx.φ so that all occurrences of x in the
// result sit under a modality: occurrences reachable without crossing one are
// replaced by ⊥ (µ) or ⊤ (ν), which preserves the semantics and makes every
// closure-graph cycle pass through a modal edge, so propositional expansion
// of any sequent terminates.
// ---------------------------------------------------------------------------

FormulaPtr guardedTransform(const FormulaPtr& f);
bool isGuarded(const FormulaPtr& f);

// ---------------------------------------------------------------------------
// The tableau game. Sequent nodes carry a set of closure items and a tracker
// state; a sequent with an unexpanded And/Or/Mu/Nu item steps through a
// priority-carrying step node; a sequent of literals and modal items is
// either a clash (prover loses), a dead end with no modal items (prover
// wins), or a modal node where the refuter picks a rule instance and the
// prover answers with one of its conclusions. The prover wins the game from
// the root iff the formula is satisfiable.
// ---------------------------------------------------------------------------

struct TableauNode {
  enum class Kind { Sequent, Instance, Step };
  Kind kind = Kind::Sequent;
  Bitset seq;            // Sequent: closure items
  int det = -1;          // Sequent: tracker state
  bool stateLike = false;  // Sequent: modal node or dead end (extraction stops here)
  bool leaf = false;       // Sequent: dead end without applicable instances
  bool clash = false;      // Sequent: contains ⊥ or a complementary literal pair
  int memo = -1;           // Sequent (modal): index into instanceSets
  int instanceIdx = -1;    // Instance: index into its sequent's instance vector
  int conclIdx = -1;       // Step out of an Instance: conclusion index
};

struct TableauGame {
  Closure cl;
  ParityGame pg;
  int initial = -1;
  std::vector<TableauNode> info;                       // parallel to pg.nodes
  std::vector<std::vector<RuleInstance>> instanceSets;  // shared per modal item set
  std::vector<std::vector<int>> instanceNodes;  // per node: instance node ids (modal sequents)
  int detStates = 0;
  DetTracker::Mode trackerMode = DetTracker::Mode::Breakpoint;
};

TableauGame buildTableauGame(const FormulaPtr& guarded, const Signature& sig,
                             const Budgets& budgets = {});

// Reads a winning prover strategy off the solved game and assembles a finite
// model: one state per strategy-reachable modal node or dead end, a one-step
// model per modal state whose carrier indexes the rule instances, and the
// strategy's conclusion choices as outcome targets.
struct Extraction {
  Cgses model;
  std::string initialState;
};
Extraction extractModel(const TableauGame& tg, const Solution& sol, const Signature& sig,
                        const Budgets& budgets = {});

// ---------------------------------------------------------------------------
// Global satisfiability.
// ---------------------------------------------------------------------------

struct SatResult {
  bool sat = false;
  std::optional<Cgses> witness;  // model-checked against the input before return
  std::string initialState;
  int closureSize = 0;
  int gameNodes = 0;
  int detStates = 0;
  DetTracker::Mode trackerMode = DetTracker::Mode::Breakpoint;
};

SatResult satisfiable(const FormulaPtr& f, const Signature& sig, const Budgets& budgets = {});

}  // namespace amcdes
