#include <doctest.h>

#include <sstream>

#include "amcdes/games.hpp"
#include "support/gen.hpp"
#include "support/oracles.hpp"

using namespace amcdes;

namespace {

void checkSolutionShape(const ParityGame& g, const Solution& sol) {
  // Winning regions partition the node set (parity games are determined).
  for (int v = 0; v < g.size(); ++v)
    CHECK(sol.winEloise.test(v) != sol.winAbelard.test(v));
  CHECK(verifyStrategy(g, Player::Eloise, sol.winEloise, sol.strategyEloise));
  CHECK(verifyStrategy(g, Player::Abelard, sol.winAbelard, sol.strategyAbelard));
}

}  // namespace

TEST_CASE("single self-loops follow the max-even convention") {
  for (int pri = 0; pri <= 3; ++pri) {
    for (Player owner : {Player::Eloise, Player::Abelard}) {
      ParityGame g;
      int v = g.addNode(owner, pri);
      g.addEdge(v, v);
      Solution sol = solve(g);
      Player expect = pri % 2 == 0 ? Player::Eloise : Player::Abelard;
      CHECK(sol.winnerOf(v) == expect);
      checkSolutionShape(g, sol);
    }
  }
}

TEST_CASE("a stuck node loses for its owner") {
  ParityGame g;
  int e = g.addNode(Player::Eloise, 0);
  int a = g.addNode(Player::Abelard, 1);
  Solution sol = solve(g);
  CHECK(sol.winnerOf(e) == Player::Abelard);
  CHECK(sol.winnerOf(a) == Player::Eloise);
  checkSolutionShape(g, sol);
}

TEST_CASE("choice beats a bad loop when a good one exists") {
  // Eloise node with priority 1 choosing between an odd and an even sink loop.
  ParityGame g;
  int root = g.addNode(Player::Eloise, 1);
  int good = g.addNode(Player::Eloise, 2);
  int bad = g.addNode(Player::Eloise, 3);
  g.addEdge(root, good);
  g.addEdge(root, bad);
  g.addEdge(good, good);
  g.addEdge(bad, bad);
  Solution sol = solve(g);
  CHECK(sol.winnerOf(root) == Player::Eloise);
  CHECK(sol.strategyEloise[root] == good);
  ParityGame h = g;
  h.nodes[root].owner = Player::Abelard;
  Solution solH = solve(h);
  CHECK(solH.winnerOf(root) == Player::Abelard);
  CHECK(solH.strategyAbelard[root] == bad);
}

TEST_CASE("both backends agree with each other and with enumeration") {
  testgen::Rng rng(99173);
  for (int i = 0; i < 300; ++i) {
    ParityGame g = testgen::randomParityGame(rng, testgen::pick(rng, 1, 8), 5);
    Solution z = solve(g, SolverBackend::Zielonka);
    Solution p = solve(g, SolverBackend::ParysQuasiPoly);
    CHECK(z.winEloise == p.winEloise);
    checkSolutionShape(g, z);
    checkSolutionShape(g, p);
    if (g.size() <= 5) {
      Bitset brute = testoracle::enumWinEloise(g);
      CHECK(z.winEloise == brute);
    }
  }
}

TEST_CASE("small games match exhaustive strategy enumeration") {
  int seen = 0;
  testgen::forEachGame(2, 2, [&](const ParityGame& g) {
    ++seen;
    Solution sol = solve(g);
    CHECK(sol.winEloise == testoracle::enumWinEloise(g));
  });
  CHECK(seen == 36 * 16);  // (2 owners * 3 priorities)^2 node configs * 2^4 edge sets
}

TEST_CASE("exchange format round-trips") {
  ParityGame g;
  int a = g.addNode(Player::Eloise, 2, "root");
  int b = g.addNode(Player::Abelard, 1);
  g.addEdge(a, b);
  g.addEdge(b, a);
  g.addEdge(b, b);
  std::string text = emitPgsolver(g);
  std::istringstream in(text);
  ParityGame back = parsePgsolver(in);
  CHECK(emitPgsolver(back) == text);
  REQUIRE(back.size() == 2);
  CHECK(back.nodes[0].owner == Player::Eloise);
  CHECK(back.nodes[0].priority == 2);
  CHECK(back.nodes[0].name == "root");
  CHECK(back.nodes[1].succ == (std::vector<int>{0, 1}));

  testgen::Rng rng(5150);
  for (int i = 0; i < 50; ++i) {
    ParityGame r = testgen::randomParityGame(rng, testgen::pick(rng, 1, 9), 4);
    std::string once = emitPgsolver(r);
    std::istringstream rin(once);
    ParityGame rb = parsePgsolver(rin);
    CHECK(emitPgsolver(rb) == once);
    CHECK(solve(r).winEloise == solve(rb).winEloise);
  }

  std::istringstream bad("parity 3;\n0 1 2 0;\n");
  CHECK_THROWS_AS(parsePgsolver(bad), Error);
}
