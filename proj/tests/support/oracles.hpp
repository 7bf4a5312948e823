#pragma once

#include <vector>

#include "amcdes/cgses.hpp"
#include "amcdes/formula.hpp"
#include "amcdes/games.hpp"
#include "amcdes/onestep.hpp"

// Independent reference implementations the suites test the engines against.
// Each one decides its question by exhaustive search and shares no code with
// the implementation under test.
namespace amcdes::testoracle {

// Per-agent size of the colored-moves universe for xi; games of this size
// suffice for any satisfiable instance, so the brute-force search below is
// exact when given this budget.
int coloredMoveBudget(const std::vector<ModalAtom>& xi, int nAgents);

// Exhaustive one-step satisfiability: does any one-step game with exactly
// movesPer moves per agent over `carrier` lift every atom of xi? Searches
// interpretations and box witnesses up to per-agent move relabeling (least
// available indices first), then runs a complete backtracking search over
// the outcome cells: box rectangles restrict cell domains, every diamond
// row demands one cell inside its tau set. One-step games are closed under
// move duplication, so smaller witnesses embed into size movesPer and the
// fixed size loses nothing. Throws BudgetExceeded past workCap steps.
bool bruteOneStepSat(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                     int carrier, int nAgents, int movesPer, long long workCap = 200000000);

// Winning region by enumeration of Eloise's positional strategies: a node
// is hers iff under some strategy no Abelard play from it reaches a stuck
// Eloise node or a cycle whose maximum priority is odd. Positional
// determinacy makes this the exact winner map.
Bitset enumWinEloise(const ParityGame& g, long long workCap = 100000000);

// OR of fixed-interpretation checks over every total assignment of the
// declared move names (the reference for openCheck).
bool openByEnumeration(const FormulaPtr& f, const Cgses& s, int w,
                       long long workCap = 100000000);

}  // namespace amcdes::testoracle
