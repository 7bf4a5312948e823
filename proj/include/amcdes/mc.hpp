#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "amcdes/cgses.hpp"
#include "amcdes/formula.hpp"
#include "amcdes/games.hpp"

namespace amcdes {

// σ: fixpoint variables to state sets.
using Valuation = std::map<std::string, Bitset>;

// Direct fixpoint semantics (Kleene iteration); the reference engine.
Bitset eval(const FormulaPtr& f, const Cgses& s, const Valuation& sigma = {});

// Literal one-step satisfaction loop: true iff some joint move of C makes
// every completion that honors a committed joint move land in y.
bool oneStepSat(const Cgses& s, int w, const std::vector<AgentId>& c, const Commitment& o,
                const Bitset& y);

// Bottom-up evaluation with every modal step delegated to oneStepSat; the
// second engine.
Bitset evalViaOneStep(const FormulaPtr& f, const Cgses& s, const Valuation& sigma = {});

// One-step satisfaction arena: initial Eloise node, one Abelard node per
// joint move of C, terminal state nodes.
struct Arena {
  struct Inner {
    JointMove moveC;
    std::vector<int> terminals;  // outcome states of honored completions
  };
  std::vector<Inner> inner;
};
Arena buildArena(const Cgses& s, int w, const std::vector<AgentId>& c, const Commitment& o);

// Parity-game model checking over the closure composed with one-step
// arenas; the third engine. Contract: gameCheck(f, s) = eval(f, s).
Bitset gameCheck(const FormulaPtr& f, const Cgses& s, int closureBudget = 4096);

// Open interpretation: search over interpretations of the named moves that
// occur in f (all other names pinned to move 0).
struct OpenResult {
  bool holds = false;
  // witness[w][agent]: name -> move index; full tables for reporting.
  std::vector<std::vector<std::map<std::string, int>>> witness;
};
OpenResult openCheck(const FormulaPtr& f, const Cgses& s, int w, long long workCap = 50000000);

}  // namespace amcdes
