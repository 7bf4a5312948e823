// Python bindings for the AMCDES toolkit. The surface is deliberately
// string-based (formula text, model JSON, problem text): enough to drive
// every engine from Python without mirroring the C++ type zoo.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "amcdes/budget.hpp"
#include "amcdes/mc.hpp"
#include "amcdes/problem_io.hpp"
#include "amcdes/resolution.hpp"
#include "amcdes/sat.hpp"

namespace py = pybind11;
using namespace amcdes;

namespace {

Cgses modelFromJson(const std::string& text, bool requireInterpTotal) {
  std::istringstream in(text);
  return loadCgses(in, requireInterpTotal);
}

OneStepProblem problemFromText(const std::string& text) {
  std::istringstream in(text);
  return loadOneStepProblem(in);
}

}  // namespace

PYBIND11_MODULE(amcdes_py, m) {
  m.doc() = "alternating-time mu-calculus with disjunctive explicit strategies: "
            "parsing, model checking, one-step reasoning, resolution, satisfiability";

  py::register_exception<BudgetExceeded>(m, "BudgetExceeded");

  m.def(
      "parse_info",
      [](const std::string& text, const std::vector<std::string>& agents) {
        ParseResult pr = parseWiden(text, agents);
        Closure cl = closure(pr.formula, pr.sig, Budgets::fromEnv().closureSize);
        py::dict d;
        d["formula"] = print(pr.formula, pr.sig);
        d["agents"] = pr.sig.agents;
        py::dict moves;
        for (int a = 0; a < pr.sig.nAgents(); ++a)
          moves[py::str(pr.sig.agents[a])] = pr.sig.moves[a];
        d["moves"] = moves;
        d["closure_size"] = int(cl.items.size());
        d["alternation_free"] = cl.alternationFree;
        return d;
      },
      py::arg("text"), py::arg("agents") = std::vector<std::string>{},
      "Parse a formula; returns its canonical print, signature and closure facts.");

  m.def(
      "satisfiable",
      [](const std::string& text, const std::vector<std::string>& agents) {
        ParseResult pr = parseWiden(text, agents);
        SatResult r = ::amcdes::satisfiable(pr.formula, pr.sig, Budgets::fromEnv());
        py::dict d;
        d["sat"] = r.sat;
        d["closure_size"] = r.closureSize;
        d["game_nodes"] = r.gameNodes;
        d["det_states"] = r.detStates;
        d["tracker_mode"] =
            r.trackerMode == DetTracker::Mode::Breakpoint ? "breakpoint" : "general";
        if (r.sat) {
          d["witness"] = saveCgses(*r.witness, r.initialState, /*pretty=*/false);
          d["initial_state"] = r.initialState;
        } else {
          d["witness"] = py::none();
          d["initial_state"] = py::none();
        }
        return d;
      },
      py::arg("text"), py::arg("agents") = std::vector<std::string>{},
      "Decide satisfiability; any witness model is eval-verified before it is returned.");

  m.def(
      "mc_holds",
      [](const std::string& modelJson, const std::string& formula, const std::string& state,
         const std::string& mode, const std::string& engine) {
        Cgses s = modelFromJson(modelJson, mode == "fixed");
        ParseResult pr = parse(formula, s.sig);
        auto it = s.stateIndex.find(state);
        if (it == s.stateIndex.end()) throw Error("unknown state '" + state + "'");
        if (mode == "open")
          return openCheck(pr.formula, s, it->second, Budgets::fromEnv().workSteps).holds;
        Bitset r = engine == "game" ? gameCheck(pr.formula, s) : eval(pr.formula, s);
        return r.test(it->second);
      },
      py::arg("model_json"), py::arg("formula"), py::arg("state"), py::arg("mode") = "fixed",
      py::arg("engine") = "naive",
      "Model-check formula at a state of the JSON-encoded model.");

  m.def(
      "eval_states",
      [](const std::string& modelJson, const std::string& formula) {
        Cgses s = modelFromJson(modelJson, true);
        ParseResult pr = parse(formula, s.sig);
        Bitset r = eval(pr.formula, s);
        std::vector<std::string> out;
        r.forEach([&](int w) { out.push_back(s.stateNames[w]); });
        return out;
      },
      py::arg("model_json"), py::arg("formula"),
      "Names of the states satisfying the formula (fixed interpretation).");

  m.def(
      "onestep_sat",
      [](const std::string& problemText) {
        OneStepProblem p = problemFromText(problemText);
        return oneStepTableauSat(p.atoms, p.tau, p.carrier, p.sig.nAgents(),
                                 Budgets::fromEnv().ruleInstances);
      },
      py::arg("problem_text"), "Decide a one-step problem given in the textual format.");

  m.def(
      "resolve_consistent",
      [](const std::string& problemText, const std::string& rule) {
        OneStepProblem p = problemFromText(problemText);
        ResMode mode =
            rule == "lsr" ? ResMode::LSR : rule == "sr+" ? ResMode::SRPlus : ResMode::SR;
        ClauseProblem cp = clausesFromAtoms(p.atoms, p.tau, p.sig.nAgents());
        return saturate(cp.clauses, mode, p.sig.nAgents(), Budgets::fromEnv().derivedClauses)
            .consistent;
      },
      py::arg("problem_text"), py::arg("rule") = "sr",
      "Saturate the clause translation of a one-step problem; true iff consistent.");
}
