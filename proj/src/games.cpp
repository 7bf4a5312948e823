#include "amcdes/games.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <sstream>

namespace amcdes {

namespace {

// Internal solver view: the input game totalized by two sink nodes so every
// node has a successor (a stuck node gets a single edge to the sink that is
// lost for its owner).
struct IGame {
  std::vector<ParityGame::Node> nodes;
  std::vector<std::vector<int>> pred;
  int originalSize = 0;

  explicit IGame(const ParityGame& g) {
    nodes = g.nodes;
    originalSize = g.size();
    int sinkE = -1, sinkA = -1;  // sinkE: Eloise paradise (pri 0), sinkA: Abelard's (pri 1)
    for (int v = 0; v < originalSize; ++v) {
      if (!nodes[v].succ.empty()) continue;
      if (nodes[v].owner == Player::Eloise) {
        if (sinkA < 0) {
          sinkA = int(nodes.size());
          nodes.push_back({Player::Eloise, 1, {}, "#sinkA"});
          nodes[sinkA].succ.push_back(sinkA);
        }
        nodes[v].succ.push_back(sinkA);
      } else {
        if (sinkE < 0) {
          sinkE = int(nodes.size());
          nodes.push_back({Player::Abelard, 0, {}, "#sinkE"});
          nodes[sinkE].succ.push_back(sinkE);
        }
        nodes[v].succ.push_back(sinkE);
      }
    }
    // Parity-preserving priority compression keeps recursion depth small.
    std::map<int, int> dist;
    for (auto& n : nodes) dist[n.priority] = 0;
    int next = -1;
    for (auto& [p, q] : dist) {
      if (next < 0) next = p % 2;
      else next += (next % 2 == p % 2) ? 2 : 1;
      q = next;
    }
    for (auto& n : nodes) n.priority = dist[n.priority];
    pred.resize(nodes.size());
    for (int v = 0; v < int(nodes.size()); ++v)
      for (int w : nodes[v].succ) pred[w].push_back(v);
  }
  int size() const { return int(nodes.size()); }
};

// Backward attractor of `target` for `player` within `sub`; records the
// attracting move for player-owned nodes outside the target.
Bitset attractor(const IGame& g, Player player, const Bitset& target, const Bitset& sub,
                 std::vector<int>& strat) {
  int n = g.size();
  Bitset attr(n);
  std::vector<int> degree(n, 0);
  std::vector<int> queue;
  for (int v = 0; v < n; ++v) {
    if (!sub.test(v)) continue;
    for (int w : g.nodes[v].succ)
      if (sub.test(w)) ++degree[v];
  }
  target.forEach([&](int v) {
    if (sub.test(v)) {
      attr.set(v);
      queue.push_back(v);
    }
  });
  for (size_t qi = 0; qi < queue.size(); ++qi) {
    int w = queue[qi];
    for (int v : g.pred[w]) {
      if (!sub.test(v) || attr.test(v)) continue;
      if (g.nodes[v].owner == player) {
        attr.set(v);
        strat[v] = w;
        queue.push_back(v);
      } else if (--degree[v] == 0) {
        attr.set(v);
        queue.push_back(v);
      }
    }
  }
  return attr;
}

struct ZResult {
  Bitset we, wa;
  std::vector<int> se, sa;
};

ZResult zielonka(const IGame& g, const Bitset& sub) {
  int n = g.size();
  ZResult r{Bitset(n), Bitset(n), std::vector<int>(n, -1), std::vector<int>(n, -1)};
  if (sub.none()) return r;

  int p = -1;
  sub.forEach([&](int v) { p = std::max(p, g.nodes[v].priority); });
  Player P = (p % 2 == 0) ? Player::Eloise : Player::Abelard;
  Bitset top(n);
  sub.forEach([&](int v) {
    if (g.nodes[v].priority == p) top.set(v);
  });

  std::vector<int> astrat(n, -1);
  Bitset a1 = attractor(g, P, top, sub, astrat);
  ZResult r1 = zielonka(g, sub.minus(a1));
  const Bitset& wOpp1 = (P == Player::Eloise) ? r1.wa : r1.we;

  if (wOpp1.none()) {
    Bitset& winP = (P == Player::Eloise) ? r.we : r.wa;
    std::vector<int>& sp = (P == Player::Eloise) ? r.se : r.sa;
    winP = sub;
    sp = (P == Player::Eloise) ? std::move(r1.se) : std::move(r1.sa);
    a1.forEach([&](int v) {
      if (g.nodes[v].owner != P) return;
      if (astrat[v] >= 0) {
        sp[v] = astrat[v];
      } else {
        // Top node: any successor inside the subgame keeps the play in sub.
        for (int w : g.nodes[v].succ)
          if (sub.test(w)) {
            sp[v] = w;
            break;
          }
      }
    });
    return r;
  }

  std::vector<int> ostrat(n, -1);
  Bitset b = attractor(g, opponent(P), wOpp1, sub, ostrat);
  ZResult r2 = zielonka(g, sub.minus(b));
  r = std::move(r2);
  Bitset& winOpp = (P == Player::Eloise) ? r.wa : r.we;
  std::vector<int>& so = (P == Player::Eloise) ? r.sa : r.se;
  winOpp |= b;
  const std::vector<int>& so1 = (P == Player::Eloise) ? r1.sa : r1.se;
  b.forEach([&](int v) {
    if (g.nodes[v].owner != opponent(P)) return;
    if (wOpp1.test(v)) so[v] = so1[v];
    else if (ostrat[v] >= 0) so[v] = ostrat[v];
  });
  return r;
}

// Quasipolynomial variant: bounded-precision recursion with halving. The
// set returned for Even contains every Even dominion of size ≤ pE and is
// disjoint from every Odd dominion of size ≤ pO (symmetrically for Odd);
// at full precision pE = pO = n it is exactly the winning region.
Bitset parysSolve(const IGame& g, Bitset sub, int h, int pSelf, int pOther, Player self) {
  auto dropAttr = [&](Bitset& s, const Bitset& target, Player pl) {
    std::vector<int> dummy(g.size(), -1);
    s = s.minus(attractor(g, pl, target, s, dummy));
  };
  if (sub.none() || pSelf == 0) return Bitset(g.size());
  if (h == 0) return self == Player::Eloise ? sub : Bitset(g.size());

  Player other = opponent(self);
  auto oneRound = [&](int prec) -> Bitset {
    Bitset topSet(g.size());
    sub.forEach([&](int v) {
      if (g.nodes[v].priority == h) topSet.set(v);
    });
    std::vector<int> dummy(g.size(), -1);
    Bitset inner = sub.minus(attractor(g, self, topSet, sub, dummy));
    return parysSolve(g, inner, h - 1, prec, pSelf, other);
  };

  while (true) {
    Bitset wo = oneRound(pOther / 2);
    if (wo.none()) break;
    dropAttr(sub, wo, other);
  }
  Bitset wo = oneRound(pOther);
  if (wo.any()) {
    dropAttr(sub, wo, other);
    while (true) {
      Bitset w2 = oneRound(pOther / 2);
      if (w2.none()) break;
      dropAttr(sub, w2, other);
    }
  }
  return sub;
}

}  // namespace

bool verifyStrategy(const ParityGame& g, Player player, const Bitset& region,
                    const std::vector<int>& strategy) {
  int n = g.size();
  // Restricted graph: player follows the strategy, opponent moves freely.
  std::vector<std::vector<int>> adj(n);
  for (int v = 0; v < n; ++v) {
    if (!region.test(v)) continue;
    if (g.nodes[v].owner == player) {
      if (g.nodes[v].succ.empty()) return false;  // stuck on own region
      int s = strategy[v];
      if (s < 0 || std::find(g.nodes[v].succ.begin(), g.nodes[v].succ.end(), s) ==
                       g.nodes[v].succ.end())
        return false;
      if (!region.test(s)) return false;
      adj[v].push_back(s);
    } else {
      for (int w : g.nodes[v].succ) {
        if (!region.test(w)) return false;  // opponent could escape
        adj[v].push_back(w);
      }
    }
  }
  // No cycle reachable in the restricted graph may have a bad max priority.
  int maxPri = 0;
  for (int v = 0; v < n; ++v)
    if (region.test(v)) maxPri = std::max(maxPri, g.nodes[v].priority);
  int badParity = (player == Player::Eloise) ? 1 : 0;
  for (int p = 0; p <= maxPri; ++p) {
    if (p % 2 != badParity) continue;
    // Cycle with max priority exactly p: look for a cyclic SCC containing a
    // p-node in the subgraph of priorities ≤ p.
    std::vector<int> comp(n, -1);
    int comps = 0;
    {
      // Iterative Tarjan over the filtered subgraph.
      std::vector<int> idx(n, -1), low(n), stk, onstk(n, 0);
      int counter = 0;
      std::vector<std::pair<int, size_t>> call;
      for (int s = 0; s < n; ++s) {
        if (!region.test(s) || g.nodes[s].priority > p || idx[s] >= 0) continue;
        call.emplace_back(s, 0);
        idx[s] = low[s] = counter++;
        stk.push_back(s);
        onstk[s] = 1;
        while (!call.empty()) {
          auto& [v, ei] = call.back();
          if (ei < adj[v].size()) {
            int w = adj[v][ei++];
            if (!region.test(w) || g.nodes[w].priority > p) continue;
            if (idx[w] < 0) {
              idx[w] = low[w] = counter++;
              stk.push_back(w);
              onstk[w] = 1;
              call.emplace_back(w, 0);
            } else if (onstk[w]) {
              low[v] = std::min(low[v], idx[w]);
            }
          } else {
            if (low[v] == idx[v]) {
              int c = comps++;
              while (true) {
                int w = stk.back();
                stk.pop_back();
                onstk[w] = 0;
                comp[w] = c;
                if (w == v) break;
              }
            }
            int finished = v;
            call.pop_back();
            if (!call.empty())
              low[call.back().first] = std::min(low[call.back().first], low[finished]);
          }
        }
      }
    }
    std::vector<int> sccSize(comps, 0);
    std::vector<bool> sccSelf(comps, false), sccHasP(comps, false);
    for (int v = 0; v < n; ++v) {
      if (comp[v] < 0) continue;
      ++sccSize[comp[v]];
      if (g.nodes[v].priority == p) sccHasP[comp[v]] = true;
      for (int w : adj[v])
        if (w == v) sccSelf[comp[v]] = true;
    }
    // A component is cyclic iff it has >1 node or a self-loop.
    for (int c = 0; c < comps; ++c)
      if (sccHasP[c] && (sccSize[c] > 1 || sccSelf[c])) return false;
  }
  return true;
}

Solution solve(const ParityGame& g, SolverBackend backend) {
  IGame ig(g);
  int n = ig.size();
  Bitset all = Bitset::full(n);
  ZResult zr;
  if (backend == SolverBackend::Zielonka) {
    zr = zielonka(ig, all);
  } else {
    int maxPri = 0;
    for (auto& nd : ig.nodes) maxPri = std::max(maxPri, nd.priority);
    int hEven = maxPri + (maxPri % 2);
    Bitset we = parysSolve(ig, all, hEven, n, n, Player::Eloise);
    // The quasipolynomial pass yields regions only; positional strategies
    // come from solving each region as a (already-won) subgame.
    zr = ZResult{we, all.minus(we), std::vector<int>(n, -1), std::vector<int>(n, -1)};
    ZResult se = zielonka(ig, we);
    ZResult sa = zielonka(ig, all.minus(we));
    if (se.we != we || sa.wa != all.minus(we))
      throw InternalError("quasipolynomial backend disagrees with recursive solver");
    zr.se = std::move(se.se);
    zr.sa = std::move(sa.sa);
  }

  Solution out;
  int m = g.size();
  out.winEloise = Bitset(m);
  out.winAbelard = Bitset(m);
  out.strategyEloise.assign(m, -1);
  out.strategyAbelard.assign(m, -1);
  for (int v = 0; v < m; ++v) {
    if (zr.we.test(v)) {
      out.winEloise.set(v);
      int s = zr.se[v];
      out.strategyEloise[v] = (s >= 0 && s < m) ? s : -1;
    } else {
      out.winAbelard.set(v);
      int s = zr.sa[v];
      out.strategyAbelard[v] = (s >= 0 && s < m) ? s : -1;
    }
  }
  return out;
}

// ------------------------------------------------------- exchange format IO

ParityGame parsePgsolver(std::istream& in) {
  ParityGame g;
  std::map<int, ParityGame::Node> byId;
  int maxId = -1;
  std::string line;
  while (std::getline(in, line, ';')) {
    std::stringstream ss(line);
    std::string first;
    if (!(ss >> first)) continue;
    if (first == "parity") continue;  // header carries only a size hint
    int id;
    try {
      id = std::stoi(first);
    } catch (...) {
      throw Error("bad node id '" + first + "' in parity game file");
    }
    int pri, owner;
    if (!(ss >> pri >> owner)) throw Error("missing priority/owner for node " + first);
    if (owner != 0 && owner != 1) throw Error("owner must be 0 or 1 for node " + first);
    ParityGame::Node node;
    node.priority = pri;
    node.owner = owner == 0 ? Player::Eloise : Player::Abelard;
    std::string succs;
    ss >> succs;
    if (!succs.empty() && succs[0] != '"') {
      std::stringstream ts(succs);
      std::string part;
      while (std::getline(ts, part, ','))
        if (!part.empty()) node.succ.push_back(std::stoi(part));
    }
    std::string rest;
    std::getline(ss, rest);
    auto q1 = rest.find('"');
    if (q1 != std::string::npos) {
      auto q2 = rest.find('"', q1 + 1);
      if (q2 != std::string::npos) node.name = rest.substr(q1 + 1, q2 - q1 - 1);
    } else if (!succs.empty() && succs[0] == '"') {
      auto q2 = succs.find('"', 1);
      if (q2 != std::string::npos) node.name = succs.substr(1, q2 - 1);
    }
    byId[id] = std::move(node);
    maxId = std::max(maxId, id);
  }
  g.nodes.resize(maxId + 1);
  for (auto& [id, node] : byId) g.nodes[id] = std::move(node);
  for (auto& node : g.nodes)
    for (int w : node.succ)
      if (w < 0 || w > maxId) throw Error("successor out of range in parity game file");
  return g;
}

std::string emitPgsolver(const ParityGame& g) {
  std::string out = "parity " + std::to_string(g.size() ? g.size() - 1 : 0) + ";\n";
  for (int v = 0; v < g.size(); ++v) {
    const auto& n = g.nodes[v];
    std::vector<std::string> ss;
    for (int w : n.succ) ss.push_back(std::to_string(w));
    out += std::to_string(v) + " " + std::to_string(n.priority) + " " +
           (n.owner == Player::Eloise ? "0" : "1") + " " + joinStrings(ss, ",");
    if (!n.name.empty()) out += " \"" + n.name + "\"";
    out += ";\n";
  }
  return out;
}

}  // namespace amcdes
