#include "amcdes/mc.hpp"

#include <algorithm>
#include <functional>

namespace amcdes {

namespace {

// Every modality must fit the model's signature before evaluation starts.
void checkSignature(const FormulaPtr& f, const Cgses& s) {
  if (f->isModal()) {
    for (AgentId a : f->coalition)
      if (a < 0 || a >= s.nAgents()) throw Error("signature mismatch: agent index out of range");
    for (AgentId a : f->commitment.agents)
      if (a < 0 || a >= s.nAgents()) throw Error("signature mismatch: agent index out of range");
    for (const JointNamed& jm : f->commitment.moves)
      for (auto& [a, name] : jm.parts)
        if (s.sig.moveIndex(a, name) < 0)
          throw Error("signature mismatch: move '" + name + "' undeclared for agent " +
                      s.sig.agents[a]);
  }
  if (f->left) checkSignature(f->left, s);
  if (f->right) checkSignature(f->right, s);
}

std::vector<AgentId> freeAgents(const Cgses& s, const std::vector<AgentId>& c,
                                const Commitment& o) {
  std::vector<AgentId> free;
  for (int j = 0; j < s.nAgents(); ++j) {
    if (std::find(c.begin(), c.end(), j) != c.end()) continue;
    if (std::find(o.agents.begin(), o.agents.end(), j) != o.agents.end()) continue;
    free.push_back(j);
  }
  return free;
}

// Enumerates f^w over all completions of m_C that honor one of the
// committed joint moves; stops early once `visit` returns false.
bool forEachHonoredOutcome(const Cgses& s, int w, const std::vector<AgentId>& c,
                           const Commitment& o, const std::vector<int>& moveC,
                           const std::function<bool(int)>& visit) {
  const StateData& st = s.states[w];
  std::vector<AgentId> free = freeAgents(s, c, o);
  std::vector<int> full(s.nAgents(), 0);
  for (size_t i = 0; i < c.size(); ++i) full[c[i]] = moveC[i];
  for (const JointNamed& om : o.moves) {
    JointMove io = interpretJoint(s, w, om);
    for (auto& [a, mv] : io.parts) full[a] = mv;
    std::vector<int> radix;
    for (AgentId j : free) radix.push_back(st.k[j]);
    std::vector<int> t(free.size(), 0);
    do {
      for (size_t i = 0; i < free.size(); ++i) full[free[i]] = t[i];
      if (!visit(s.outcomeOf(w, full))) return false;
    } while (nextTuple(t, radix));
  }
  return true;
}

struct EvalCtx {
  const Cgses& s;
  Valuation sigma;

  Bitset go(const FormulaPtr& f) {
    int n = s.nStates();
    switch (f->kind) {
      case FKind::Top: return Bitset::full(n);
      case FKind::Bot: return Bitset(n);
      case FKind::Atom: {
        Bitset r(n);
        for (int w = 0; w < n; ++w)
          if (s.states[w].atoms.count(f->name)) r.set(w);
        return r;
      }
      case FKind::NegAtom: {
        Bitset r(n);
        for (int w = 0; w < n; ++w)
          if (!s.states[w].atoms.count(f->name)) r.set(w);
        return r;
      }
      case FKind::Var: {
        auto it = sigma.find(f->name);
        if (it == sigma.end()) throw Error("valuation missing variable '" + f->name + "'");
        return it->second;
      }
      case FKind::And: return go(f->left) & go(f->right);
      case FKind::Or: return go(f->left) | go(f->right);
      case FKind::Box:
      case FKind::Diamond: {
        Bitset y = go(f->left);
        Bitset r(n);
        for (int w = 0; w < n; ++w) {
          // Box: some joint move of C makes every honored outcome land in
          // y. Diamond: for every joint move of C some honored outcome
          // lands in y (the complement-dual reading).
          std::vector<int> radix;
          for (AgentId j : f->coalition) radix.push_back(s.states[w].k[j]);
          std::vector<int> mc(f->coalition.size(), 0);
          bool box = f->kind == FKind::Box;
          bool result = !box;
          do {
            if (box) {
              bool allIn = forEachHonoredOutcome(s, w, f->coalition, f->commitment, mc,
                                                 [&](int t) { return y.test(t); });
              if (allIn) {
                result = true;
                break;
              }
            } else {
              bool someIn = !forEachHonoredOutcome(s, w, f->coalition, f->commitment, mc,
                                                   [&](int t) { return !y.test(t); });
              if (!someIn) {
                result = false;
                break;
              }
            }
          } while (nextTuple(mc, radix));
          if (result) r.set(w);
        }
        return r;
      }
      case FKind::Mu:
      case FKind::Nu: {
        Bitset x = f->kind == FKind::Mu ? Bitset(n) : Bitset::full(n);
        while (true) {
          auto saved = sigma.find(f->name);
          Bitset prev = x;
          sigma[f->name] = x;
          x = go(f->left);
          if (saved == sigma.end()) sigma.erase(f->name);
          if (x == prev) return x;
        }
      }
    }
    throw InternalError("unreachable formula kind");
  }
};

}  // namespace

Bitset eval(const FormulaPtr& f, const Cgses& s, const Valuation& sigma) {
  checkSignature(f, s);
  EvalCtx ctx{s, sigma};
  return ctx.go(f);
}

bool oneStepSat(const Cgses& s, int w, const std::vector<AgentId>& c, const Commitment& o,
                const Bitset& y) {
  std::vector<int> radix;
  for (AgentId j : c) radix.push_back(s.states[w].k[j]);
  std::vector<int> mc(c.size(), 0);
  do {
    bool allIn = forEachHonoredOutcome(s, w, c, o, mc, [&](int t) { return y.test(t); });
    if (allIn) return true;
  } while (nextTuple(mc, radix));
  return false;
}

Bitset evalViaOneStep(const FormulaPtr& f, const Cgses& s, const Valuation& sigma) {
  checkSignature(f, s);
  int n = s.nStates();
  std::function<Bitset(const FormulaPtr&, Valuation&)> go = [&](const FormulaPtr& g,
                                                                Valuation& sig) -> Bitset {
    switch (g->kind) {
      case FKind::Top: return Bitset::full(n);
      case FKind::Bot: return Bitset(n);
      case FKind::Atom: {
        Bitset r(n);
        for (int w = 0; w < n; ++w)
          if (s.states[w].atoms.count(g->name)) r.set(w);
        return r;
      }
      case FKind::NegAtom: {
        Bitset r(n);
        for (int w = 0; w < n; ++w)
          if (!s.states[w].atoms.count(g->name)) r.set(w);
        return r;
      }
      case FKind::Var: {
        auto it = sig.find(g->name);
        if (it == sig.end()) throw Error("valuation missing variable '" + g->name + "'");
        return it->second;
      }
      case FKind::And: return go(g->left, sig) & go(g->right, sig);
      case FKind::Or: return go(g->left, sig) | go(g->right, sig);
      case FKind::Box: {
        Bitset y = go(g->left, sig);
        Bitset r(n);
        for (int w = 0; w < n; ++w)
          if (oneStepSat(s, w, g->coalition, g->commitment, y)) r.set(w);
        return r;
      }
      case FKind::Diamond: {
        // ⟨C,O⟩φ = ¬[C,O]¬φ, routed through the same one-step loop.
        Bitset y = go(g->left, sig);
        Bitset r(n);
        for (int w = 0; w < n; ++w)
          if (!oneStepSat(s, w, g->coalition, g->commitment, y.complement())) r.set(w);
        return r;
      }
      case FKind::Mu:
      case FKind::Nu: {
        Bitset x = g->kind == FKind::Mu ? Bitset(n) : Bitset::full(n);
        while (true) {
          Bitset prev = x;
          sig[g->name] = x;
          x = go(g->left, sig);
          sig.erase(g->name);
          if (x == prev) return x;
        }
      }
    }
    throw InternalError("unreachable formula kind");
  };
  Valuation sig = sigma;
  return go(f, sig);
}

Arena buildArena(const Cgses& s, int w, const std::vector<AgentId>& c, const Commitment& o) {
  Arena a;
  std::vector<int> radix;
  for (AgentId j : c) radix.push_back(s.states[w].k[j]);
  std::vector<int> mc(c.size(), 0);
  do {
    Arena::Inner inner;
    for (size_t i = 0; i < c.size(); ++i) inner.moveC.parts.emplace_back(c[i], mc[i]);
    forEachHonoredOutcome(s, w, c, o, mc, [&](int t) {
      inner.terminals.push_back(t);
      return true;
    });
    std::sort(inner.terminals.begin(), inner.terminals.end());
    inner.terminals.erase(std::unique(inner.terminals.begin(), inner.terminals.end()),
                          inner.terminals.end());
    a.inner.push_back(std::move(inner));
  } while (nextTuple(mc, radix));
  return a;
}

Bitset gameCheck(const FormulaPtr& f, const Cgses& s, int closureBudget) {
  checkSignature(f, s);
  Closure cl = closure(f, s.sig, closureBudget);
  int n = s.nStates();
  int m = int(cl.items.size());

  ParityGame g;
  // Node (w, i) for every state and closure index, then arena inner nodes.
  auto nodeId = [&](int w, int i) { return w * m + i; };
  for (int w = 0; w < n; ++w) {
    for (int i = 0; i < m; ++i) {
      const ClosureEntry& e = cl.items[i];
      Player owner = Player::Abelard;
      switch (e.f->kind) {
        case FKind::Top: owner = Player::Abelard; break;  // stuck Abelard: Eloise wins
        case FKind::Bot: owner = Player::Eloise; break;
        case FKind::Atom:
          owner = s.states[w].atoms.count(e.f->name) ? Player::Abelard : Player::Eloise;
          break;
        case FKind::NegAtom:
          owner = s.states[w].atoms.count(e.f->name) ? Player::Eloise : Player::Abelard;
          break;
        case FKind::And: owner = Player::Abelard; break;
        case FKind::Or: owner = Player::Eloise; break;
        case FKind::Box: owner = Player::Eloise; break;     // picks the joint move of C
        case FKind::Diamond: owner = Player::Abelard; break;
        case FKind::Mu:
        case FKind::Nu: owner = Player::Abelard; break;
        case FKind::Var: throw InternalError("variable in closure");
      }
      g.addNode(owner, e.priority, s.stateNames[w] + ": " + e.key);
    }
  }
  for (int w = 0; w < n; ++w) {
    for (int i = 0; i < m; ++i) {
      const ClosureEntry& e = cl.items[i];
      int v = nodeId(w, i);
      switch (e.f->kind) {
        case FKind::And:
        case FKind::Or:
          g.addEdge(v, nodeId(w, cl.succ[i][0]));
          g.addEdge(v, nodeId(w, cl.succ[i][1]));
          break;
        case FKind::Mu:
        case FKind::Nu:
          g.addEdge(v, nodeId(w, cl.succ[i][0]));
          break;
        case FKind::Box:
        case FKind::Diamond: {
          int body = cl.succ[i][0];
          Arena a = buildArena(s, w, e.f->coalition, e.f->commitment);
          // Inner owner is the opponent of the node that picked the move.
          Player innerOwner =
              e.f->kind == FKind::Box ? Player::Abelard : Player::Eloise;
          for (const Arena::Inner& inner : a.inner) {
            int iv = g.addNode(innerOwner, 0);
            g.addEdge(v, iv);
            for (int t : inner.terminals) g.addEdge(iv, nodeId(t, body));
          }
          break;
        }
        default:
          break;  // literals are dead ends
      }
    }
  }

  Solution sol = solve(g);
  Bitset out(n);
  for (int w = 0; w < n; ++w)
    if (sol.winEloise.test(nodeId(w, cl.root))) out.set(w);
  return out;
}

OpenResult openCheck(const FormulaPtr& f, const Cgses& s, int w, long long workCap) {
  checkSignature(f, s);
  // Only names that occur in the formula matter; everything else defaults
  // to move 0 in the witness.
  std::vector<std::set<std::string>> needed(s.nAgents());
  std::function<void(const FormulaPtr&)> collect = [&](const FormulaPtr& g) {
    if (g->isModal())
      for (const JointNamed& jm : g->commitment.moves)
        for (auto& [a, name] : jm.parts) needed[a].insert(name);
    if (g->left) collect(g->left);
    if (g->right) collect(g->right);
  };
  collect(f);

  struct Slot {
    int state;
    AgentId agent;
    std::string name;
    int k;
  };
  std::vector<Slot> slots;
  for (int st = 0; st < s.nStates(); ++st)
    for (int j = 0; j < s.nAgents(); ++j)
      for (const std::string& nm : needed[j])
        slots.push_back({st, j, nm, s.states[st].k[j]});

  long long total = 1;
  for (const Slot& sl : slots) {
    total *= sl.k;
    if (total > workCap)
      throw BudgetExceeded("open-interpretation search space exceeds work cap");
  }

  Cgses work = s;
  OpenResult res;
  std::function<bool(size_t)> dfs = [&](size_t idx) -> bool {
    if (idx == slots.size()) return eval(f, work).test(w);
    const Slot& sl = slots[idx];
    for (int v = 0; v < sl.k; ++v) {
      work.states[sl.state].interp[sl.agent][sl.name] = v;
      if (dfs(idx + 1)) return true;
    }
    return false;
  };
  if (dfs(0)) {
    res.holds = true;
    res.witness.resize(s.nStates());
    for (int st = 0; st < s.nStates(); ++st) {
      res.witness[st].resize(s.nAgents());
      for (int j = 0; j < s.nAgents(); ++j) {
        for (const std::string& nm : s.sig.moves[j]) {
          auto it = work.states[st].interp[j].find(nm);
          res.witness[st][j][nm] = it != work.states[st].interp[j].end() ? it->second : 0;
        }
      }
    }
  }
  return res;
}

}  // namespace amcdes
