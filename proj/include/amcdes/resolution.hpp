#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "amcdes/onestep.hpp"
#include "amcdes/util.hpp"

namespace amcdes {

// Sorted terms over agent sorts: variables, per-box witness constants
// e^id, named-move constants, and per-diamond response functions g^id
// whose arguments are the moves of that diamond's coalition.
struct Term {
  enum class Kind { Var, EConst, NConst, App };
  Kind kind = Kind::Var;
  int sort = -1;  // the agent whose move this term denotes
  int id = -1;    // Var: variable id; EConst: box id; App: function family id
  std::string name;                // NConst only
  std::vector<AgentId> argSorts;   // App only: coalition, ascending
  std::vector<Term> args;          // App only: aligned with argSorts

  static Term var(int id, int sort);
  static Term eConst(int boxId, int sort);
  static Term nConst(std::string name, int sort);
  static Term app(int funId, int sort, std::vector<AgentId> argSorts, std::vector<Term> args);

  bool operator==(const Term& o) const;
};
int termCompare(const Term& a, const Term& b);  // total order
bool occursIn(int varId, const Term& t);
void collectVars(const Term& t, std::set<int>& out);
std::string showTerm(const Term& t);

// One term per agent; index = sort.
using TermTuple = std::vector<Term>;
std::string showTuple(const TermTuple& t);

struct Substitution {
  std::map<int, Term> map;  // idempotent

  Term apply(const Term& t) const;
  TermTuple apply(const TermTuple& t) const;
  std::string show() const;
};

enum class UnifyFail { None, Clash, Occurs };
struct UnifyResult {
  UnifyFail fail = UnifyFail::None;
  Substitution sub;  // valid iff fail == None
};
// Most general unifier of all tuples componentwise (no renaming applied).
UnifyResult unifyTuples(const std::vector<TermTuple>& tuples);

// ---------------------------------------------------------------- clauses

struct Literal {
  Bitset set;       // subset of the carrier
  TermTuple tuple;
};

struct Clause {
  std::vector<Literal> lits;  // normalized: tuples strictly increasing

  // Every literal carries the empty set (incl. the empty clause).
  bool blatantlyInconsistent() const;
};
// Merge literals with identical tuples by set union; sort.
Clause normalizeClause(Clause c);
Clause applySub(const Substitution& s, const Clause& c);
Clause renameApart(const Clause& c, int offset);  // shift all variable ids
int maxVarId(const Clause& c);                    // -1 when variable-free
std::string showClause(const Clause& c);
// Canonical serialization modulo variable renaming (for deduplication).
std::string clauseKey(const Clause& c);

// (SR): unify the selected left tuples with the selected right tuple;
// conclusion Γσ, ((⋃A_i)∩B)(ūσ), Δσ. Selected literals leave Γ/Δ.
// Right clause must be variable-disjoint from the left (rename first).
std::optional<Clause> resolveSR(const Clause& left, const std::vector<int>& leftSel,
                                const Clause& right, int rightSel,
                                UnifyFail* whyNot = nullptr, Substitution* sigmaOut = nullptr);
// (SR⁺): two-sided implicit factoring.
std::optional<Clause> resolveSRPlus(const Clause& left, const std::vector<int>& leftSel,
                                    const Clause& right, const std::vector<int>& rightSel,
                                    UnifyFail* whyNot = nullptr, Substitution* sigmaOut = nullptr);

enum class ResMode { SR, LSR, SRPlus };

struct DerivStep {
  ResMode mode;
  int left;
  std::vector<int> leftLits;
  int right;
  std::vector<int> rightLits;
  int result;
  std::string sigma;
};

struct SaturateResult {
  bool consistent = true;
  std::vector<Clause> clauses;   // inputs first, then derived, id = index
  std::vector<DerivStep> steps;
  int blatantId = -1;            // first blatantly inconsistent clause, or -1
  std::string dump() const;      // one step per line
};

// Fair FIFO saturation with deduplication modulo renaming. LSR adds, on
// top of every mgu step, variants instantiating one variable to an
// occurring constant (a terminating slice of arbitrary-unifier steps).
SaturateResult saturate(const std::vector<Clause>& phi, ResMode mode, int nAgents,
                        long long clauseCap = 100000);

// ------------------------------------------- clause generation from atoms

struct ClauseProblem {
  std::vector<Clause> clauses;
  std::vector<TermTuple> seedTuples;  // all argument tuples, canonical var ids
  int boxCount = 0;                   // e^0..e^(boxCount-1)
  int diamondCount = 0;               // g^0..g^(diamondCount-1)
};
// Per box and committed move a singleton clause (witness constants on
// the coalition, the committed names on its agents, variables
// elsewhere); per diamond one clause with a literal per committed move
// (variables on the coalition, the response function on the remaining
// uncommitted agents).
ClauseProblem clausesFromAtoms(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                               int nAgents);

// -------------------------------------------------- propositional variant

struct PropLiteral {
  Bitset set;
  int y = -1;
};
struct PropClause {
  std::vector<PropLiteral> lits;  // normalized: y strictly increasing
  bool blatantlyInconsistent() const;
};
PropClause normalizeProp(PropClause c);
std::string propKey(const PropClause& c);

struct PropResult {
  bool consistent = true;
  std::vector<PropClause> clauses;
  int blatantId = -1;
};
PropResult propSaturate(const std::vector<PropClause>& phi, long long clauseCap = 100000);
// Greedy maximal-consistent extension over the lexicographically
// enumerated clause universe, then f(y) = the unique w with {w}(y).
// Requires a consistent, saturated input (throws Error otherwise).
std::vector<int> propExtractModel(const PropResult& saturated, int carrier, int ySize);

// --------------------------------- unification closure & colored universe

// Closure of the seed tuples under pairwise unification (tuples renamed
// apart, results canonicalized modulo renaming).
std::vector<TermTuple> unificationClosure(const std::vector<TermTuple>& seed,
                                          long long cap = 20000);
std::string tupleKey(const TermTuple& t);      // canonical modulo renaming
TermTuple canonicalTuple(const TermTuple& t);  // first-occurrence var ids

// Interpretation of the term symbols over colored moves: every agent
// plays pairs (symbol, color) encoded as move indices; box constants
// and named moves carry color 0, and each diamond's response function
// places the color completing that diamond's designated sum on its
// least responding agent. zeroColors deliberately breaks the latter
// (every response takes color 0) for mutation tests.
struct SymbolModel {
  int nAgents = 0;
  int kPer = 1;
  int alpha = 0;
  int beta = 0;
  std::vector<std::string> names;  // sorted
  std::vector<int> leastOther;     // per diamond: least agent outside C∪H, or -1
  bool zeroColors = false;

  int eMove(int boxId) const { return boxId; }
  int nMove(const std::string& n) const;
  int gBase() const { return alpha + int(names.size()); }
  int colorOf(int move) const;
  // Value of g^diaId at the given argument moves, observed at `sort`.
  int gValue(int diaId, int sort, const std::vector<int>& argMoves) const;
  int evalTerm(const Term& t, const std::map<int, int>& varVal) const;
};
SymbolModel coloredUniverse(const std::vector<ModalAtom>& xi, int nAgents,
                            bool zeroColors = false);

// For every pair of closure tuples: whenever the equation t = u has a
// solution over the model, the tuples must unify and every solution
// must factorize through the mgu.
bool checkEquationallyComplete(const SymbolModel& m, const std::vector<TermTuple>& ct,
                               long long stepCap = 50000000);

}  // namespace amcdes
