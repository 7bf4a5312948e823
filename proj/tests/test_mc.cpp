#include <doctest.h>

#include <sstream>

#include "amcdes/mc.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace amcdes;

namespace {

Cgses loadText(const std::string& text, bool requireInterpTotal = true) {
  std::istringstream in(text);
  return loadCgses(in, requireInterpTotal);
}

Bitset bits(int n, std::initializer_list<int> on) {
  Bitset b(n);
  for (int i : on) b.set(i);
  return b;
}

// Agent 1 picks the successor along a three-state chain; agent 2 is a
// bystander so {1}-modalities are not grand.
const char* kChain = R"({
  "agents": ["1", "2"],
  "states": {
    "s0": {"k": {"1": 2, "2": 1}, "outcome": {"0,0": "s0", "1,0": "s1"}},
    "s1": {"k": {"1": 2, "2": 1}, "outcome": {"0,0": "s1", "1,0": "s2"}},
    "s2": {"atoms": ["p"], "k": {"1": 1, "2": 1}, "outcome": {"0,0": "s2"}}
  }
})";

}  // namespace

TEST_CASE("literals and plain fixpoints") {
  Cgses s = loadText(kChain);
  auto pr = parse("p", s.sig);
  CHECK(eval(pr.formula, s) == bits(3, {2}));
  CHECK(eval(parse("!p", s.sig).formula, s) == bits(3, {0, 1}));
  CHECK(eval(parse("true", s.sig).formula, s) == Bitset::full(3));
  CHECK(eval(parse("false", s.sig).formula, s) == Bitset(3));
  CHECK(eval(parse("mu x. x", s.sig).formula, s) == Bitset(3));
  CHECK(eval(parse("nu x. x", s.sig).formula, s) == Bitset::full(3));

  Valuation sigma{{"z", bits(3, {1})}};
  CHECK(eval(mkVar("z"), s, sigma) == bits(3, {1}));
  CHECK(evalViaOneStep(mkVar("z"), s, sigma) == bits(3, {1}));
}

TEST_CASE("reachability and safety along the chain") {
  Cgses s = loadText(kChain);
  // Agent 1 can steer every state to p eventually.
  auto reach = parse("mu x. p | [{1}] x", s.sig);
  CHECK(eval(reach.formula, s) == Bitset::full(3));
  CHECK(gameCheck(reach.formula, s) == Bitset::full(3));
  // Staying inside p for ever only works at the sink.
  auto stay = parse("nu x. p & [{1}] x", s.sig);
  CHECK(eval(stay.formula, s) == bits(3, {2}));
  CHECK(gameCheck(stay.formula, s) == bits(3, {2}));
  // The diamond quantifies over agent 1's moves universally.
  auto all = parse("<{1}> p", s.sig);
  CHECK(eval(all.formula, s) == bits(3, {2}));
  auto some = parse("[{1}] p", s.sig);
  CHECK(eval(some.formula, s) == bits(3, {1, 2}));
}

TEST_CASE("one-step satisfaction against explicit tables") {
  Cgses s = loadText(R"({
    "agents": ["1", "2"],
    "explicit_moves": {"2": ["m0", "m1"]},
    "states": {
      "s0": {
        "k": {"1": 2, "2": 2},
        "outcome": {"0,0": "s0", "0,1": "s1", "1,0": "s1", "1,1": "s0"},
        "interp": {"2": {"m0": 0, "m1": 1}}
      },
      "s1": {"atoms": ["p"], "k": {"1": 1, "2": 1},
             "outcome": {"0,0": "s1"}, "interp": {"2": {"m0": 0, "m1": 0}}}
    }
  })");
  std::vector<AgentId> c{0};
  Bitset y1 = bits(2, {1});

  // Committing agent 2 to m0 pins the column; agent 1 answers with row 1.
  Commitment m0only{{1}, {JointNamed{{{1, "m0"}}}}};
  CHECK(oneStepSat(s, 0, c, m0only, y1));
  CHECK(oneStepSat(s, 0, c, m0only, bits(2, {0})));

  // The disjunctive commitment keeps both columns honored: no row is
  // constant, so the box fails.
  Commitment either{{1}, {JointNamed{{{1, "m0"}}}, JointNamed{{{1, "m1"}}}}};
  CHECK(!oneStepSat(s, 0, c, either, y1));

  // Without commitment the box also fails; the empty commitment honors
  // every completion.
  CHECK(!oneStepSat(s, 0, c, Commitment::empty(), y1));

  // Y = W is always reachable; Y = {} never is.
  CHECK(oneStepSat(s, 0, c, either, Bitset::full(2)));
  CHECK(!oneStepSat(s, 0, c, either, Bitset(2)));
  CHECK(oneStepSat(s, 0, {}, Commitment::empty(), Bitset::full(2)));
  CHECK(!oneStepSat(s, 0, {}, Commitment::empty(), Bitset(2)));

  // Arena shape: one inner node per joint move of the coalition.
  Arena arena = buildArena(s, 0, c, either);
  REQUIRE(arena.inner.size() == 2);
  CHECK(arena.inner[0].terminals.size() == 2);
  Arena noC = buildArena(s, 0, {}, m0only);
  REQUIRE(noC.inner.size() == 1);
  CHECK(noC.inner[0].terminals.size() == 2);  // rows of the pinned column
}

TEST_CASE("grand modalities on a singleton universe") {
  Cgses s = loadText(R"({
    "agents": ["1"],
    "states": {
      "s0": {"k": {"1": 2}, "outcome": {"0": "s0", "1": "s1"}},
      "s1": {"atoms": ["p"], "k": {"1": 1}, "outcome": {"0": "s1"}}
    }
  })");
  // Grand box is existential over outcomes, grand diamond universal.
  CHECK(eval(parse("[{1}] p", s.sig).formula, s) == bits(2, {0, 1}));
  CHECK(eval(parse("<{1}> p", s.sig).formula, s) == bits(2, {1}));
  CHECK(gameCheck(parse("[{1}] p", s.sig).formula, s) == bits(2, {0, 1}));
}

TEST_CASE("three engines agree on random instances") {
  testgen::Rng rng(311311);
  const std::vector<std::string> atoms{"p", "q"};
  for (int i = 0; i < 120; ++i) {
    Signature sig = testgen::randomSignature(rng, 2, 3, 2);
    Cgses m = testgen::randomModel(rng, sig, 4, 2, atoms);
    FormulaPtr f = testgen::randomFormula(rng, sig, 3, atoms);
    Bitset direct = eval(f, m);
    CHECK(evalViaOneStep(f, m) == direct);
    CHECK(gameCheck(f, m) == direct);
  }
}

TEST_CASE("semantic laws hold on random instances") {
  testgen::Rng rng(271828);
  const std::vector<std::string> atoms{"p", "q"};
  for (int i = 0; i < 100; ++i) {
    Signature sig = testgen::randomSignature(rng, 2, 3, 2);
    Cgses m = testgen::randomModel(rng, sig, 4, 2, atoms);
    FormulaPtr f = testgen::randomFormula(rng, sig, 3, atoms);
    CHECK(eval(nnfNegate(f, sig.nAgents()), m) == eval(f, m).complement());
    if (f->isFix()) CHECK(eval(unfold(f), m) == eval(f, m));
  }
}

TEST_CASE("open interpretation searches the name tables") {
  Cgses s = loadText(R"({
    "agents": ["1"],
    "explicit_moves": {"1": ["b"]},
    "states": {
      "s0": {"k": {"1": 2}, "outcome": {"0": "s1", "1": "s0"}},
      "s1": {"atoms": ["p"], "k": {"1": 1}, "outcome": {"0": "s1"}}
    }
  })",
                    false);
  auto pr = parse("[{}, (1: b)] p", s.sig);
  OpenResult r = openCheck(pr.formula, s, 0);
  REQUIRE(r.holds);
  CHECK(r.witness[0][0].at("b") == 0);

  // Plugging the witness back in satisfies the formula under the fixed
  // interpretation.
  Cgses fixed = s;
  for (int w = 0; w < s.nStates(); ++w)
    for (int j = 0; j < s.nAgents(); ++j) fixed.states[w].interp[j] = r.witness[w][j];
  fixed.validate();
  CHECK(eval(pr.formula, fixed).test(0));

  // No interpretation can satisfy a conjunction that pins b both ways.
  auto contra = parse("[{}, (1: b)] p & <{}, (1: b)> !p", s.sig);
  CHECK(!openCheck(contra.formula, s, 0).holds);
}

TEST_CASE("open interpretation agrees with exhaustive enumeration") {
  testgen::Rng rng(161803);
  const std::vector<std::string> atoms{"p"};
  int held = 0;
  for (int i = 0; i < 60; ++i) {
    Signature sig = testgen::randomSignature(rng, 2, 2, 2);
    Cgses m = testgen::randomModel(rng, sig, 2, 2, atoms);
    FormulaPtr f = testgen::randomFormula(rng, sig, 3, atoms);
    OpenResult r = openCheck(f, m, 0);
    CHECK(r.holds == testoracle::openByEnumeration(f, m, 0));
    if (r.holds) {
      ++held;
      Cgses fixed = m;
      for (int w = 0; w < m.nStates(); ++w)
        for (int j = 0; j < m.nAgents(); ++j) fixed.states[w].interp[j] = r.witness[w][j];
      CHECK(eval(f, fixed).test(0));
    }
  }
  CHECK(held > 0);
}

TEST_CASE("game construction respects its closure budget") {
  Cgses s = loadText(kChain);
  auto pr = parse("mu x. (p | [{1}] x) & (q | <{1}> x)", s.sig);
  CHECK_THROWS_AS(gameCheck(pr.formula, s, 2), BudgetExceeded);
}
