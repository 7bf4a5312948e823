#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "amcdes/cgses.hpp"
#include "amcdes/formula.hpp"
#include "amcdes/util.hpp"

namespace amcdes {

// One modal literal ♥(C,O)v over a propositional variable v (an index
// into a tau table).
struct ModalAtom {
  bool box = true;
  std::vector<AgentId> coalition;  // C, sorted
  Commitment commitment;           // O, with C ∩ Ag(O) = ∅
  int var = -1;

  bool isGrand(int nAgents) const {
    return int(coalition.size() + commitment.agents.size()) == nAgents;
  }
  bool operator==(const ModalAtom&) const = default;
};

// A single game step detached from any state graph: per-agent move
// counts, a total outcome map over joint moves, per-agent tables for
// named moves, and variable extensions over the carrier.
struct OneStepGame {
  int nAgents = 0;
  int carrier = 0;
  std::vector<int> k;                              // per agent, ≥ 1
  std::vector<int> f;                              // mixed-radix over k, agent 0 most significant
  std::vector<std::map<std::string, int>> interp;  // per agent: name -> move
  std::vector<Bitset> tau;                         // per variable id

  int outcome(const std::vector<int>& m) const { return f[tupleIndex(m, k)]; }
  JointMove interpret(const JointNamed& jm) const;
};

// ♥(C,O)v holds in g: Box — some joint move of C makes every completion
// honoring one of O's moves land in tau[v]; Diamond — the dual.
bool liftingHolds(const ModalAtom& atom, const OneStepGame& g);

// One instance of the one-step tableau rule. The premise is a subset of
// the atom set it was matched against (indices below refer into that
// set): boxes [D_j,P_{G_j}]a_j, optionally one distinguished diamond
// ⟨E,Q_K⟩b, and grand-coalition diamonds ⟨C_j,r_{H_j}⟩c_j. When no
// diamond is distinguished the instance is of the specialized rule kind
// whose distinguished slot is the valid literal ⟨N,{()}⟩⊤ and whose
// index sets are full.
struct RuleInstance {
  bool synthetic = false;    // distinguished slot filled by ⟨N,{()}⟩⊤
  std::vector<int> boxes;    // atom indices, ascending
  int distinguished = -1;    // atom index, or -1 iff synthetic
  std::vector<int> grands;   // atom indices, ascending
  JointNamed l;              // the witnessing joint explicit move over E∩L

  struct Conclusion {
    int q = -1;              // index into the distinguished commitment's moves; -1 if synthetic
    std::vector<int> vars;   // variable ids of Θ_q, sorted unique
  };
  std::vector<Conclusion> conclusions;  // one per q
};

// Streams every admissible rule instance with premise ⊆ xi. Index sets
// are maximal per (premise, q, l): smaller choices yield conclusions
// whose extensions are supersets, so they never change any verdict.
// `visit` returns false to stop early. Throws BudgetExceeded when more
// than `candidateCap` premise/l combinations get examined.
void matchRules(const std::vector<ModalAtom>& xi, int nAgents,
                const std::function<bool(const RuleInstance&)>& visit,
                long long candidateCap = 200000);
std::vector<RuleInstance> matchRulesAll(const std::vector<ModalAtom>& xi, int nAgents,
                                        long long candidateCap = 200000);

// Ξ is one-step satisfiable over tau iff every rule instance has some
// conclusion whose tau-sets intersect. Dispatches to the grand-free
// fast path when applicable.
bool oneStepTableauSat(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                       int carrier, int nAgents, long long candidateCap = 200000);
// The always-general enumeration (used for cross-checking the fast path).
bool oneStepTableauSatGeneral(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                              int carrier, int nAgents, long long candidateCap = 200000);
// Lean enumeration for atom sets without grand-coalition members: the
// grand-diamond premise slots are empty throughout, so the instance
// space collapses to boxes plus at most one distinguished diamond.
// pre: no atom of xi is grand.
bool oneStepSatGrandFree(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                         int carrier, int nAgents, long long candidateCap = 200000);

// Names occurring in xi's commitments, per agent, sorted unique.
std::vector<std::vector<std::string>> occurringNames(const std::vector<ModalAtom>& xi,
                                                     int nAgents);

}  // namespace amcdes
