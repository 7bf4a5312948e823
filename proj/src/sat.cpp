#include <utility>

#include "amcdes/mc.hpp"
#include "amcdes/sat.hpp"

namespace amcdes {

SatResult satisfiable(const FormulaPtr& f, const Signature& sig, const Budgets& budgets) {
  if (!freeVars(f).empty()) throw Error("satisfiability requires a closed formula");

  // A purely propositional formula infers an empty agent universe, but a
  // witness model needs at least one agent; the choice cannot matter then.
  Signature s = sig;
  if (s.agents.empty()) {
    s.agents.push_back("1");
    s.moves.push_back({});
  }

  FormulaPtr g = guardedTransform(f);
  TableauGame tg = buildTableauGame(g, s, budgets);
  Solution sol = solve(tg.pg);

  SatResult r;
  r.closureSize = int(tg.cl.items.size());
  r.gameNodes = tg.pg.size();
  r.detStates = tg.detStates;
  r.trackerMode = tg.trackerMode;
  r.sat = sol.winEloise.test(tg.initial);
  if (r.sat) {
    Extraction ex = extractModel(tg, sol, s, budgets);
    Bitset holds = eval(f, ex.model);
    if (!holds.test(ex.model.stateIndex.at(ex.initialState)))
      throw InternalError("extracted witness failed model-check verification");
    r.witness = std::move(ex.model);
    r.initialState = std::move(ex.initialState);
  }
  return r;
}

}  // namespace amcdes
