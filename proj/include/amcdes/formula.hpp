#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "amcdes/util.hpp"

namespace amcdes {

// Agents are indices into Signature::agents; the vector order is the linear
// order on agents used everywhere (clause sorts, outcome keys, move tuples).
using AgentId = int;

struct Signature {
  std::vector<std::string> agents;
  std::vector<std::vector<std::string>> moves;  // declared explicit-move names, per agent

  int nAgents() const { return int(agents.size()); }
  int agentIndex(const std::string& name) const;
  int moveIndex(AgentId j, const std::string& name) const;  // -1 if undeclared
  bool operator==(const Signature&) const = default;
};

// A joint explicit move: one named move for each agent of some coalition.
struct JointNamed {
  std::vector<std::pair<AgentId, std::string>> parts;  // sorted by agent, unique

  std::vector<AgentId> domain() const;
  const std::string* moveOf(AgentId j) const;
  bool operator==(const JointNamed&) const = default;
  auto operator<=>(const JointNamed&) const = default;
};

// n =⊓ m: agreement on the shared agents.
bool compatibleNamed(const JointNamed& n, const JointNamed& m);
// Merge two compatible joint moves; nullopt on disagreement.
std::optional<JointNamed> mergeNamed(const JointNamed& n, const JointNamed& m);

// Disjunctive explicit strategy O: a non-empty set of joint explicit moves,
// all with the same domain Ag(O). The empty commitment has agents = {} and
// moves = {()}.
struct Commitment {
  std::vector<AgentId> agents;      // Ag(O), sorted
  std::vector<JointNamed> moves;    // sorted, unique, non-empty

  static Commitment empty() { return Commitment{{}, {JointNamed{}}}; }
  bool isEmpty() const { return agents.empty(); }
  bool operator==(const Commitment&) const = default;
};

enum class FKind { Top, Bot, Atom, NegAtom, Var, And, Or, Box, Diamond, Mu, Nu };

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FKind kind{};
  std::string name;          // Atom/NegAtom/Var: the name; Mu/Nu: the bound variable
  FormulaPtr left, right;    // And/Or: both; Box/Diamond/Mu/Nu: left = body
  std::vector<AgentId> coalition;  // Box/Diamond: C, sorted
  Commitment commitment;           // Box/Diamond: O

  bool isLiteral() const {
    return kind == FKind::Top || kind == FKind::Bot || kind == FKind::Atom ||
           kind == FKind::NegAtom;
  }
  bool isModal() const { return kind == FKind::Box || kind == FKind::Diamond; }
  bool isFix() const { return kind == FKind::Mu || kind == FKind::Nu; }
};

FormulaPtr mkTop();
FormulaPtr mkBot();
FormulaPtr mkAtom(const std::string& p);
FormulaPtr mkNegAtom(const std::string& p);
FormulaPtr mkVar(const std::string& x);
FormulaPtr mkAnd(FormulaPtr a, FormulaPtr b);
FormulaPtr mkOr(FormulaPtr a, FormulaPtr b);
// Validates C ∩ Ag(O) = ∅ and non-disjunctiveness of grand-coalition
// modalities against nAgents.
FormulaPtr mkBox(std::vector<AgentId> c, Commitment o, FormulaPtr body, int nAgents);
FormulaPtr mkDiamond(std::vector<AgentId> c, Commitment o, FormulaPtr body, int nAgents);
FormulaPtr mkMu(const std::string& x, FormulaPtr body);
FormulaPtr mkNu(const std::string& x, FormulaPtr body);

// Parse result: the formula plus the signature in scope. If `given` is
// present it is used (and all names must be declared in it); otherwise the
// signature is inferred from the formula text: agents are every name used in
// a coalition or commitment position, moves are the named moves used.
struct ParseResult {
  FormulaPtr formula;
  Signature sig;
};
ParseResult parse(const std::string& text, const std::optional<Signature>& given = {});

// Inference as above, but with extra agent names merged into the universe
// first. Widening the universe keeps a coalition-plus-commitment modality
// from counting as grand, which would forbid a disjunctive commitment.
ParseResult parseWiden(const std::string& text, const std::vector<std::string>& extraAgents);

// Agent-name order used by signature inference: all-digit names sort
// numerically and come first; the rest is lexicographic.
bool agentNameLess(const std::string& a, const std::string& b);

std::string print(const FormulaPtr& f, const Signature& sig);

// NNF complement: ¬φ with negation pushed to atoms.
FormulaPtr nnfNegate(const FormulaPtr& f, int nAgents);

// One-step unfolding of a fixpoint: µx.φ ↦ φ[x := µx.φ].
FormulaPtr unfold(const FormulaPtr& fix);

// α-equivalence (canonical binder renaming on both sides).
bool alphaEq(const FormulaPtr& a, const FormulaPtr& b, const Signature& sig);

// Substitute every free occurrence of variable x by  r (capture-free given
// pairwise distinct binder names).
FormulaPtr substitute(const FormulaPtr& f, const std::string& x, const FormulaPtr& r);

std::set<std::string> freeVars(const FormulaPtr& f);
std::set<std::string> atomNames(const FormulaPtr& f);

// Fischer-Ladner-style closure: subformulas with fixpoints represented by
// their one-step unfoldings. Fixpoint elements carry a parity priority:
// outermore binders dominate, ν gets even, µ odd, under the max-even
// convention used project-wide.
struct ClosureEntry {
  FormulaPtr f;
  std::string key;   // printed form; unique within the closure
  int priority = 0;  // 0 for non-fixpoint entries
  bool badState = false;  // lies in a cyclic strongly connected component
                          // whose fixpoint unfoldings are all µ
  int sccId = -1;
};

struct Closure {
  std::vector<ClosureEntry> items;
  std::map<std::string, int> index;  // key -> items position
  std::vector<std::vector<int>> succ;  // closure graph: And/Or -> children,
                                       // modal -> body, fixpoint -> unfolding
  int root = -1;                       // index of the input formula
  int maxPriority = 0;
  bool alternationFree = true;  // no SCC mixes µ- and ν-unfoldings

  int indexOf(const FormulaPtr& f, const Signature& sig) const;
};

// maxSize guards against closure blowup (BudgetExceeded).
Closure closure(const FormulaPtr& f, const Signature& sig, int maxSize);

}  // namespace amcdes
