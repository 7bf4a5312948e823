#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "amcdes/extract.hpp"
#include "amcdes/onestep.hpp"
#include "amcdes/problem_io.hpp"
#include "amcdes/resolution.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace amcdes;

namespace {

Bitset bits(int n, std::initializer_list<int> on) {
  Bitset b(n);
  for (int i : on) b.set(i);
  return b;
}

ModalAtom atom(bool box, std::vector<AgentId> c, int var, Commitment o = Commitment::empty()) {
  ModalAtom a;
  a.box = box;
  a.coalition = std::move(c);
  a.commitment = std::move(o);
  a.var = var;
  return a;
}

bool allLiftingsHold(const std::vector<ModalAtom>& xi, const OneStepGame& g) {
  for (const ModalAtom& a : xi)
    if (!liftingHolds(a, g)) return false;
  return true;
}

}  // namespace

TEST_CASE("lifting on hand-built one-step games") {
  // Two agents, two moves each, XOR-shaped outcome over carrier {0, 1}.
  OneStepGame g;
  g.nAgents = 2;
  g.carrier = 2;
  g.k = {2, 2};
  g.f = {0, 1, 1, 0};  // f(0,0)=0 f(0,1)=1 f(1,0)=1 f(1,1)=0
  g.interp.resize(2);
  g.tau = {bits(2, {0}), bits(2, {1})};

  // Both single-agent diamonds hold: the other agent can always answer.
  CHECK(liftingHolds(atom(false, {0}, 0), g));
  CHECK(liftingHolds(atom(false, {1}, 1), g));
  // No row or column of the XOR table is constant: boxes fail.
  CHECK(!liftingHolds(atom(true, {0}, 0), g));
  CHECK(!liftingHolds(atom(true, {1}, 0), g));
  // tau = W makes any box trivial; tau = {} defeats it.
  g.tau.push_back(Bitset::full(2));
  CHECK(liftingHolds(atom(true, {0}, 2), g));
  CHECK(liftingHolds(atom(true, {}, 2), g));
  g.tau.push_back(Bitset(2));
  CHECK(!liftingHolds(atom(true, {0}, 3), g));

  // Committing agent 1 to a named move pins its coordinate.
  g.interp[1]["m"] = 1;
  Commitment o{{1}, {JointNamed{{{1, "m"}}}}};
  CHECK(liftingHolds(atom(true, {0}, 1, o), g));   // pick row 0: f(0,1)=1
  CHECK(!liftingHolds(atom(true, {0}, 0, o), g));  // column 1 never hits 0
  CHECK(liftingHolds(atom(false, {}, 1, o), g));   // some honored cell hits tau
}

TEST_CASE("rule instances cover crossing boxes exactly once") {
  std::vector<ModalAtom> xi{atom(true, {0}, 0), atom(true, {1}, 1)};
  bool sawBoth = false;
  for (const RuleInstance& inst : matchRulesAll(xi, 2)) {
    if (inst.boxes == std::vector<int>{0, 1}) {
      sawBoth = true;
      REQUIRE(inst.conclusions.size() == 1);
      CHECK(inst.synthetic);
      CHECK(inst.conclusions[0].vars == (std::vector<int>{0, 1}));
    }
  }
  CHECK(sawBoth);

  // Boxes with overlapping coalitions never share a premise.
  std::vector<ModalAtom> clash{atom(true, {0}, 0), atom(true, {0}, 1)};
  for (const RuleInstance& inst : matchRulesAll(clash, 2))
    CHECK(inst.boxes.size() <= 1);

  // At most one non-grand diamond is distinguished per instance.
  std::vector<ModalAtom> dias{atom(false, {0}, 0), atom(false, {1}, 1)};
  for (const RuleInstance& inst : matchRulesAll(dias, 3)) {
    CHECK(inst.grands.empty());
    for (const auto& cc : inst.conclusions)
      CHECK(!(std::count(cc.vars.begin(), cc.vars.end(), 0) &&
              std::count(cc.vars.begin(), cc.vars.end(), 1)));
  }
}

TEST_CASE("one-step tableau verdicts on canonical shapes") {
  // The empty atom set is satisfiable over any carrier.
  CHECK(oneStepTableauSat({}, {}, 1, 2));

  std::vector<ModalAtom> crossing{atom(true, {0}, 0), atom(true, {1}, 1)};
  CHECK(oneStepTableauSat(crossing, {bits(2, {0}), bits(2, {0})}, 2, 2));
  CHECK(!oneStepTableauSat(crossing, {bits(2, {0}), bits(2, {1})}, 2, 2));

  // Diamonds never cross: disjoint targets stay satisfiable.
  std::vector<ModalAtom> dias{atom(false, {0}, 0), atom(false, {1}, 1)};
  CHECK(oneStepTableauSat(dias, {bits(2, {0}), bits(2, {1})}, 2, 2));
  // A diamond with an empty target is unsatisfiable on its own.
  CHECK(!oneStepTableauSat({atom(false, {0}, 0)}, {Bitset(2)}, 2, 2));
  CHECK(!oneStepTableauSat({atom(true, {0}, 0)}, {Bitset(2)}, 2, 2));

  // Grand diamonds constrain every outcome, grand boxes only one.
  std::vector<ModalAtom> grandD{atom(false, {0}, 0), atom(false, {0}, 1)};
  CHECK(!oneStepTableauSat(grandD, {bits(2, {0}), bits(2, {1})}, 2, 1));
  CHECK(oneStepTableauSat(grandD, {bits(2, {0, 1}), bits(2, {1})}, 2, 1));
  std::vector<ModalAtom> grandB{atom(true, {0}, 0), atom(true, {0}, 1)};
  CHECK(oneStepTableauSat(grandB, {bits(2, {0}), bits(2, {1})}, 2, 1));

  // A box against the distinguished diamond with the same coalition: the
  // diamond picks the box's committed column only if targets intersect.
  std::vector<ModalAtom> pair{atom(true, {0}, 0), atom(false, {0}, 1)};
  CHECK(oneStepTableauSat(pair, {bits(2, {0}), bits(2, {0})}, 2, 2));
  CHECK(!oneStepTableauSat(pair, {bits(2, {0}), bits(2, {1})}, 2, 2));
}

TEST_CASE("fast path agrees with the general enumeration") {
  testgen::Rng rng(140143);
  int grandFree = 0;
  for (int i = 0; i < 400; ++i) {
    testgen::OneStepInstance inst = testgen::randomOneStep(rng, 3, 3, 3, 2);
    bool general = oneStepTableauSatGeneral(inst.xi, inst.tau, inst.carrier, inst.nAgents);
    CHECK(oneStepTableauSat(inst.xi, inst.tau, inst.carrier, inst.nAgents) == general);
    bool anyGrand = false;
    for (const ModalAtom& a : inst.xi) anyGrand |= a.isGrand(inst.nAgents);
    if (!anyGrand) {
      ++grandFree;
      CHECK(oneStepSatGrandFree(inst.xi, inst.tau, inst.carrier, inst.nAgents) == general);
    }
  }
  CHECK(grandFree > 50);
}

TEST_CASE("satisfiability is monotone in the targets") {
  testgen::Rng rng(900913);
  for (int i = 0; i < 200; ++i) {
    testgen::OneStepInstance inst = testgen::randomOneStep(rng, 3, 3, 3, 2);
    if (!oneStepTableauSat(inst.xi, inst.tau, inst.carrier, inst.nAgents)) continue;
    std::vector<Bitset> wider = inst.tau;
    for (Bitset& b : wider)
      if (testgen::chance(rng, 1, 2)) b = Bitset::full(inst.carrier);
    CHECK(oneStepTableauSat(inst.xi, wider, inst.carrier, inst.nAgents));
  }
}

TEST_CASE("enumeration respects the candidate cap") {
  std::vector<ModalAtom> xi;
  for (int v = 0; v < 10; ++v) xi.push_back(atom(v % 2 == 0, {v % 3}, v));
  std::vector<Bitset> tau(10, Bitset::full(2));
  CHECK_THROWS_AS(oneStepTableauSatGeneral(xi, tau, 2, 4, 3), BudgetExceeded);
}

TEST_CASE("extraction builds verified witnesses") {
  // A single grand box over one target state forces a constant table.
  std::vector<ModalAtom> grand{atom(true, {0, 1}, 0)};
  std::vector<Bitset> tau{bits(2, {1})};
  OneStepGame g = extractOneStepModel(grand, tau, 2, 2);
  CHECK(g.k == (std::vector<int>{1, 1}));
  CHECK(g.f == (std::vector<int>{1}));
  CHECK(allLiftingsHold(grand, g));

  // One box plus two diamonds: every agent gets 1 + |names| + 2*2 moves.
  Commitment named{{1}, {JointNamed{{{1, "m"}}}}};
  std::vector<ModalAtom> mix{atom(true, {0}, 0, named), atom(false, {1}, 1),
                             atom(false, {}, 2)};
  std::vector<Bitset> tmix{bits(2, {0}), bits(2, {0, 1}), bits(2, {1})};
  REQUIRE(oneStepTableauSat(mix, tmix, 2, 3));
  OneStepGame gm = extractOneStepModel(mix, tmix, 2, 3);
  CHECK(gm.k == std::vector<int>(3, 1 + 1 + 4));
  CHECK(allLiftingsHold(mix, gm));
  CHECK(gm.interp[1].at("m") == coloredUniverse(mix, 3).nMove("m"));
}

TEST_CASE("random satisfiable instances extract successfully") {
  testgen::Rng rng(555001);
  int extracted = 0;
  for (int i = 0; i < 200 && extracted < 80; ++i) {
    testgen::OneStepInstance inst = testgen::randomOneStep(rng, 3, 3, 3, 2);
    if (!oneStepTableauSat(inst.xi, inst.tau, inst.carrier, inst.nAgents)) continue;
    OneStepGame g = extractOneStepModel(inst.xi, inst.tau, inst.carrier, inst.nAgents);
    CHECK(allLiftingsHold(inst.xi, g));
    ++extracted;
  }
  CHECK(extracted >= 80);
}

TEST_CASE("tableau matches brute-force search on small instances") {
  testgen::Rng rng(670899);
  for (int i = 0; i < 150; ++i) {
    testgen::OneStepInstance inst = testgen::randomOneStep(rng, 2, 2, 2, 1);
    int budget = testoracle::coloredMoveBudget(inst.xi, inst.nAgents);
    bool brute = testoracle::bruteOneStepSat(inst.xi, inst.tau, inst.carrier, inst.nAgents, budget);
    CHECK(oneStepTableauSat(inst.xi, inst.tau, inst.carrier, inst.nAgents) == brute);
  }
}

TEST_CASE("occurring names are collected per agent") {
  Commitment o1{{1}, {JointNamed{{{1, "z"}}}, JointNamed{{{1, "a"}}}}};
  Commitment o2{{0, 1}, {JointNamed{{{0, "q"}, {1, "a"}}}}};
  std::vector<ModalAtom> xi{atom(true, {0}, 0, o1), atom(false, {2}, 1, o2)};
  auto names = occurringNames(xi, 3);
  REQUIRE(names.size() == 3);
  CHECK(names[0] == std::vector<std::string>{"q"});
  CHECK(names[1] == (std::vector<std::string>{"a", "z"}));
  CHECK(names[2].empty());
}

TEST_CASE("one-step problem files round-trip") {
  const char* text = R"(# two crossing boxes over a shared target
agents: 2
carrier: 2
[{1}, (2: m)] a
<{2}> b
tau a = {0}
tau b = {0, 1}
)";
  std::istringstream in(text);
  OneStepProblem p = loadOneStepProblem(in);
  CHECK(p.sig.agents == (std::vector<std::string>{"1", "2"}));
  CHECK(p.carrier == 2);
  REQUIRE(p.atoms.size() == 2);
  CHECK(p.atoms[0].box);
  CHECK(p.atoms[0].coalition == std::vector<AgentId>{0});
  CHECK(p.atoms[0].commitment.agents == std::vector<AgentId>{1});
  CHECK(p.varNames == (std::vector<std::string>{"a", "b"}));
  CHECK(p.tau[0] == bits(2, {0}));
  CHECK(p.tau[1] == bits(2, {0, 1}));

  std::string shown = showOneStepProblem(p);
  std::istringstream again(shown);
  OneStepProblem q = loadOneStepProblem(again);
  CHECK(showOneStepProblem(q) == shown);
  CHECK(q.atoms == p.atoms);
  CHECK(q.tau == p.tau);

  auto fails = [](const std::string& body) {
    std::istringstream s(body);
    CHECK_THROWS_AS(loadOneStepProblem(s), Error);
  };
  fails("carrier: 2\n[{1}] a\n");                    // missing tau
  fails("carrier: 2\n[{1}] a\ntau a = {0}\ntau a = {0}\n");  // duplicate tau
  fails("carrier: 2\ntau a = {9}\n[{1}] a\n");       // value outside carrier
  fails("[{1}] a\ntau a = {0}\n");                   // missing carrier
  fails("agents: 1\ncarrier: 1\n[{2}] a\ntau a = {0}\n");  // unknown agent
}
