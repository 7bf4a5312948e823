#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "amcdes/util.hpp"

namespace amcdes {

enum class Player { Eloise = 0, Abelard = 1 };

inline Player opponent(Player p) {
  return p == Player::Eloise ? Player::Abelard : Player::Eloise;
}

// Max-even convention throughout: Eloise wins an infinite play iff the
// maximum priority seen infinitely often is even; a stuck node loses for
// its owner.
struct ParityGame {
  struct Node {
    Player owner = Player::Eloise;
    int priority = 0;
    std::vector<int> succ;
    std::string name;  // optional, for dumps
  };
  std::vector<Node> nodes;

  int addNode(Player owner, int priority, std::string name = "") {
    nodes.push_back({owner, priority, {}, std::move(name)});
    return int(nodes.size()) - 1;
  }
  void addEdge(int from, int to) { nodes[from].succ.push_back(to); }
  int size() const { return int(nodes.size()); }
};

struct Solution {
  Bitset winEloise, winAbelard;
  // strategy[v] = chosen successor for v's owner on their winning region,
  // -1 elsewhere.
  std::vector<int> strategyEloise, strategyAbelard;

  Player winnerOf(int v) const { return winEloise.test(v) ? Player::Eloise : Player::Abelard; }
};

enum class SolverBackend { Zielonka, ParysQuasiPoly };

// Solves the game; the returned strategies are checked by verifyStrategy
// before being handed out.
Solution solve(const ParityGame& g, SolverBackend backend = SolverBackend::Zielonka);

// True iff every play that starts in `region`, with `player` following
// `strategy` and the opponent moving freely, stays winning for `player`
// (parity on cycles of the strategy-restricted graph plus stuck-node
// analysis).
bool verifyStrategy(const ParityGame& g, Player player, const Bitset& region,
                    const std::vector<int>& strategy);

// Textual parity-game exchange format:
//   parity <maxNodeId>;
//   <id> <priority> <owner> <succ,succ,...> ["name"];
// owner 0 = Eloise (even player), 1 = Abelard.
ParityGame parsePgsolver(std::istream& in);
std::string emitPgsolver(const ParityGame& g);

}  // namespace amcdes
