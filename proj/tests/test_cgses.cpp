#include <doctest.h>

#include <sstream>

#include "amcdes/cgses.hpp"
#include "support/gen.hpp"

using namespace amcdes;

namespace {

const char* kTwoStateModel = R"({
  "agents": ["1", "2"],
  "explicit_moves": {"1": ["a"], "2": []},
  "states": {
    "s0": {
      "atoms": ["p"],
      "k": {"1": 2, "2": 1},
      "outcome": {"0,0": "s0", "1,0": "s1"},
      "interp": {"1": {"a": 1}, "2": {}}
    },
    "s1": {
      "k": {"1": 1, "2": 2},
      "outcome": {"0,0": "s1", "0,1": "s0"},
      "interp": {"1": {"a": 0}, "2": {}}
    }
  }
})";

Cgses loadText(const std::string& text, bool requireInterpTotal = true) {
  std::istringstream in(text);
  return loadCgses(in, requireInterpTotal);
}

JointMove jm(std::vector<std::pair<AgentId, int>> parts) {
  JointMove m;
  m.parts = std::move(parts);
  return m;
}

}  // namespace

TEST_CASE("joint move extension, compatibility, and merging") {
  JointMove empty;
  JointMove a0 = jm({{0, 0}});
  JointMove a0b1 = jm({{0, 0}, {1, 1}});
  JointMove a1 = jm({{0, 1}});

  CHECK(extends(empty, a0b1));
  CHECK(extends(a0, a0b1));
  CHECK(extends(a0b1, a0b1));
  CHECK(!extends(a0b1, a0));
  CHECK(!extends(a1, a0b1));

  CHECK(compatible(a0, jm({{1, 5}})));
  CHECK(compatible(a0, a0b1));
  CHECK(!compatible(a0, a1));
  CHECK(mergeMoves(a0, jm({{1, 1}})) == a0b1);
  CHECK(!mergeMoves(a0, a1).has_value());
  CHECK(mergeMoves(a0, a0) == a0);

  CHECK(a0b1.domain() == (std::vector<AgentId>{0, 1}));
  REQUIRE(a0b1.moveOf(1) != nullptr);
  CHECK(*a0b1.moveOf(1) == 1);
  CHECK(a0b1.moveOf(2) == nullptr);
  CHECK(a0b1.restrictTo({1}) == jm({{1, 1}}));
  CHECK(a0b1.restrictTo({2}) == empty);
}

TEST_CASE("named joint moves mirror the index-valued operations") {
  JointNamed n1{{{0, "a"}}};
  JointNamed n2{{{1, "b"}}};
  JointNamed n3{{{0, "c"}}};
  CHECK(compatibleNamed(n1, n2));
  CHECK(!compatibleNamed(n1, n3));
  auto merged = mergeNamed(n1, n2);
  REQUIRE(merged.has_value());
  CHECK(merged->domain() == (std::vector<AgentId>{0, 1}));
  CHECK(!mergeNamed(n1, n3).has_value());
}

TEST_CASE("loading a model fills tables and indexes") {
  Cgses s = loadText(kTwoStateModel);
  CHECK(s.nStates() == 2);
  CHECK(s.nAgents() == 2);
  CHECK(s.stateNames == (std::vector<std::string>{"s0", "s1"}));
  CHECK(s.stateIndex.at("s1") == 1);
  CHECK(s.states[0].atoms.count("p") == 1);
  CHECK(s.states[1].atoms.empty());
  CHECK(s.states[0].k == (std::vector<int>{2, 1}));
  CHECK_NOTHROW(s.validate());

  // Outcome tables are mixed-radix with agent order as significance order.
  CHECK(s.outcomeOf(0, {0, 0}) == 0);
  CHECK(s.outcomeOf(0, {1, 0}) == 1);
  CHECK(s.outcomeOf(1, {0, 1}) == 0);

  // The per-state interpretation resolves explicit names to move indices.
  JointMove got = interpretJoint(s, 0, JointNamed{{{0, "a"}}});
  CHECK(got == jm({{0, 1}}));
  CHECK(interpretJoint(s, 1, JointNamed{{{0, "a"}}}) == jm({{0, 0}}));
  CHECK(interpretJoint(s, 0, JointNamed{}) == JointMove{});
  CHECK_THROWS_AS(interpretJoint(s, 0, JointNamed{{{0, "zz"}}}), Error);
}

TEST_CASE("validate rejects broken tables") {
  const Cgses base = loadText(kTwoStateModel);

  Cgses m = base;
  m.states[0].k[0] = 0;
  CHECK_THROWS_AS(m.validate(), Error);

  m = base;
  m.states[0].outcome[0] = 99;
  CHECK_THROWS_AS(m.validate(), Error);

  m = base;
  m.states[0].outcome.pop_back();
  CHECK_THROWS_AS(m.validate(), Error);

  m = base;
  m.states[1].interp[0]["a"] = 5;  // s1 has a single move for agent 1
  CHECK_THROWS_AS(m.validate(), Error);

  m = base;
  m.states[0].interp[0]["zz"] = 0;
  CHECK_THROWS_AS(m.validate(), Error);

  // A missing interpretation entry only matters when totality is required.
  m = base;
  m.states[0].interp[0].erase("a");
  CHECK_THROWS_AS(m.validate(), Error);
  CHECK_NOTHROW(m.validate(false));

  m = base;
  m.states.clear();
  m.stateNames.clear();
  m.stateIndex.clear();
  CHECK_THROWS_AS(m.validate(), Error);
}

TEST_CASE("save and load round-trip byte-stably") {
  Cgses s = loadText(kTwoStateModel);
  std::string once = saveCgses(s);
  Cgses back = loadText(once);
  CHECK(saveCgses(back) == once);

  // Witness emission records the initial state; load tolerates it.
  std::string withInitial = saveCgses(s, "s1");
  CHECK(withInitial.find("\"initial\"") != std::string::npos);
  CHECK_NOTHROW(loadText(withInitial));

  // Compact emission stays on one line.
  CHECK(saveCgses(s, "", false).find('\n') == std::string::npos);
}

TEST_CASE("round-trip holds on random models") {
  testgen::Rng rng(424242);
  const std::vector<std::string> atoms{"p", "q"};
  for (int i = 0; i < 100; ++i) {
    Signature sig = testgen::randomSignature(rng, 1, 3, 2);
    Cgses m = testgen::randomModel(rng, sig, 4, 3, atoms);
    std::string once = saveCgses(m);
    Cgses back = loadText(once);
    CHECK(saveCgses(back) == once);
    CHECK(back.nStates() == m.nStates());
  }
}

TEST_CASE("malformed model files are rejected") {
  CHECK_THROWS_WITH_AS(loadText("not json"), doctest::Contains("invalid JSON"), Error);
  CHECK_THROWS_AS(loadText("[1,2]"), Error);
  CHECK_THROWS_AS(loadText(R"({"agents": ["1"], "bogus": 3, "states": {}})"), Error);
  CHECK_THROWS_AS(loadText(R"({"states": {}})"), Error);
  // Unknown outcome target.
  CHECK_THROWS_AS(
      loadText(R"({"agents": ["1"], "states": {"s0": {"k": {"1": 1}, "outcome": {"0": "s9"}}}})"),
      Error);
  // Partial outcome table.
  CHECK_THROWS_AS(
      loadText(R"({"agents": ["1"], "states": {"s0": {"k": {"1": 2}, "outcome": {"0": "s0"}}}})"),
      Error);
  // k missing an agent.
  CHECK_THROWS_AS(
      loadText(R"({"agents": ["1", "2"], "states": {"s0": {"k": {"1": 1}, "outcome": {"0,0": "s0"}}}})"),
      Error);
  // Declared move never interpreted.
  const char* noInterp = R"({"agents": ["1"], "explicit_moves": {"1": ["a"]},
    "states": {"s0": {"k": {"1": 1}, "outcome": {"0": "s0"}}}})";
  CHECK_THROWS_AS(loadText(noInterp), Error);
  CHECK_NOTHROW(loadText(noInterp, false));
}
