"""Smoke tests for the amcdes_py module: every binding gets one meaningful call."""

import sys

import amcdes_py as am


def check(cond, what):
    if not cond:
        print("FAIL:", what)
        sys.exit(1)
    print("ok:", what)


def main():
    info = am.parse_info("[{Alice}, (Bob:{cancelPrint|splitPrint})] printed", ["Env"])
    check(info["agents"] == ["Alice", "Bob", "Env"], "parse_info widened signature")
    check(info["moves"]["Bob"] == ["cancelPrint", "splitPrint"], "parse_info move names")
    check(info["alternation_free"], "parse_info alternation-free flag")

    try:
        am.parse_info("[{Alice}, (Bob:{cancelPrint|splitPrint})] printed")
        check(False, "grand disjunctive modality must be rejected")
    except RuntimeError:
        check(True, "grand disjunctive modality rejected without widening")

    r = am.satisfiable("p & !p")
    check(r["sat"] is False, "p & !p unsat")
    r = am.satisfiable("nu x. (p & [{1}] x)")
    check(r["sat"] is True, "nu-box formula sat")
    check(r["tracker_mode"] == "breakpoint", "alternation-free tracker path")
    holds = am.mc_holds(r["witness"], "nu x. (p & [{1}] x)", r["initial_state"])
    check(holds, "witness model-checks true at its initial state")
    holds_game = am.mc_holds(r["witness"], "nu x. (p & [{1}] x)", r["initial_state"],
                             engine="game")
    check(holds_game, "game engine agrees on the witness")

    r = am.satisfiable("nu x. mu y. ((granted & <{1}> x) | <{1}> y)")
    check(r["sat"] is True and r["tracker_mode"] == "general", "alternating formula, general path")

    problem_unsat = """
agents: 2
carrier: 2
[{1}] a
[{2}] b
tau a = {0}
tau b = {1}
"""
    problem_sat = """
agents: 2
carrier: 2
[{1}] a
[{2}] b
tau a = {0}
tau b = {0, 1}
"""
    check(am.onestep_sat(problem_unsat) is False, "one-step problem unsat")
    check(am.onestep_sat(problem_sat) is True, "one-step problem sat")
    check(am.resolve_consistent(problem_unsat) is False, "resolution refutes the unsat problem")
    check(am.resolve_consistent(problem_sat) is True, "resolution consistent on the sat problem")
    check(am.resolve_consistent(problem_unsat, rule="sr+") is False, "sr+ agrees")

    witness = am.satisfiable("p | !p")["witness"]
    states = am.eval_states(witness, "p | !p")
    check(len(states) >= 1, "eval_states returns the full carrier on a tautology")

    print("all python smoke tests passed")


if __name__ == "__main__":
    main()
