#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "amcdes/cgses.hpp"
#include "amcdes/formula.hpp"
#include "amcdes/games.hpp"
#include "amcdes/onestep.hpp"
#include "amcdes/sat.hpp"

// Seeded random and exhaustive generators shared by the unit and acceptance
// suites. Every function is deterministic in the engine state it is given.
namespace amcdes::testgen {

using Rng = std::mt19937_64;

int pick(Rng& rng, int lo, int hi);  // uniform, inclusive
bool chance(Rng& rng, int num, int den);

// Agents "1".."n" with n in [minAgents, maxAgents]; each agent declares
// 0..maxNames explicit-move names, distinct across agents.
Signature randomSignature(Rng& rng, int minAgents, int maxAgents, int maxNames);

// Validated model over sig: 1..maxStates states "s0".., per-agent move
// counts in [1, maxK], atoms drawn from the pool, total interpretation.
Cgses randomModel(Rng& rng, const Signature& sig, int maxStates, int maxK,
                  const std::vector<std::string>& atomPool);

// Closed NNF formula over sig, operator nesting bounded by depth. Every
// modality respects the grand-coalition restriction; commitments only
// mention declared names.
FormulaPtr randomFormula(Rng& rng, const Signature& sig, int depth,
                         const std::vector<std::string>& atomPool);

// Random coalition/commitment pair over sig, obeying the same restrictions
// as randomFormula's modalities.
struct CoPair {
  std::vector<AgentId> coalition;
  Commitment commitment;
};
CoPair randomCoPair(Rng& rng, const Signature& sig);

struct OneStepInstance {
  std::vector<ModalAtom> xi;
  std::vector<Bitset> tau;  // one entry per variable id
  int carrier = 1;
  int nAgents = 1;
};

// nAgents in [1, maxAgents], carrier in [1, maxCarrier], up to maxAtoms
// atoms, up to maxNames declared names per agent; every atom owns its own
// variable. Atom shapes obey the coalition/commitment side conditions.
OneStepInstance randomOneStep(Rng& rng, int maxAgents, int maxAtoms, int maxCarrier,
                              int maxNames);

// Every instance with N = {0,1}, exactly one named move per agent, at most
// maxAtoms atoms (each owning its own variable), carrier in [1, maxCarrier],
// and arbitrary tau sets. Atom multisets are visited once (order of equal
// atoms never matters).
void forEachTwoAgentInstance(int maxAtoms, int maxCarrier,
                             const std::function<void(const OneStepInstance&)>& visit);

// Arbitrary game on `nodes` nodes: random owners, priorities in
// [0, maxPriority], random edge set (stuck nodes possible).
ParityGame randomParityGame(Rng& rng, int nodes, int maxPriority);

// Every game with exactly n nodes and priorities in [0, maxPriority],
// over all owner assignments and all edge sets.
void forEachGame(int n, int maxPriority, const std::function<void(const ParityGame&)>& visit);

// Nondeterministic parity automaton with 1..maxStates states, 1..maxLetters
// letters, priorities in [0, maxPriority]; possibly missing transitions and
// a nonempty initial set.
GenericNPA randomNpa(Rng& rng, int maxStates, int maxLetters, int maxPriority);

}  // namespace amcdes::testgen
