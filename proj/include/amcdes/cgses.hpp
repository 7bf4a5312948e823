#pragma once

#include <iosfwd>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "amcdes/formula.hpp"
#include "amcdes/util.hpp"

namespace amcdes {

// A joint move of index-valued moves for some coalition.
struct JointMove {
  std::vector<std::pair<AgentId, int>> parts;  // sorted by agent, unique

  std::vector<AgentId> domain() const;
  const int* moveOf(AgentId j) const;
  JointMove restrictTo(const std::vector<AgentId>& d) const;
  bool operator==(const JointMove&) const = default;
  auto operator<=>(const JointMove&) const = default;
};

// n ⊑ m: m extends n.
bool extends(const JointMove& n, const JointMove& m);
// n =⊓ m: agreement on shared agents.
bool compatible(const JointMove& n, const JointMove& m);
std::optional<JointMove> mergeMoves(const JointMove& n, const JointMove& m);

struct StateData {
  std::set<std::string> atoms;
  std::vector<int> k;                  // per agent, ≥ 1
  std::vector<int> outcome;            // mixed-radix table over k, agent 0 most significant
  std::vector<std::map<std::string, int>> interp;  // per agent: move name -> index
};

struct Cgses {
  Signature sig;
  std::vector<std::string> stateNames;
  std::map<std::string, int> stateIndex;
  std::vector<StateData> states;

  int nStates() const { return int(states.size()); }
  int nAgents() const { return sig.nAgents(); }
  // Fails with Error on any invariant violation. Open-interpretation
  // checking tolerates missing interp entries, hence the flag.
  void validate(bool requireInterpTotal = true) const;

  // The outcome state of a full joint move given as one index per agent.
  int outcomeOf(int w, const std::vector<int>& full) const {
    return states[w].outcome[tupleIndex(full, states[w].k)];
  }
};

// I^w applied componentwise to a joint explicit move.
JointMove interpretJoint(const Cgses& s, int w, const JointNamed& m);

// JSON file format (see README). `load` validates; `save` emits the
// canonical form (sorted keys, full outcome tables).
Cgses loadCgses(std::istream& in, bool requireInterpTotal = true);
Cgses loadCgsesFile(const std::string& path, bool requireInterpTotal = true);
// initialState, when non-empty, is emitted as a top-level "initial" key
// (used by sat witnesses); load ignores it.
std::string saveCgses(const Cgses& s, const std::string& initialState = "", bool pretty = true);

}  // namespace amcdes
