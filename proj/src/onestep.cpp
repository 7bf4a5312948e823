#include "amcdes/onestep.hpp"

#include <algorithm>

namespace amcdes {

JointMove OneStepGame::interpret(const JointNamed& jm) const {
  JointMove r;
  for (auto& [a, name] : jm.parts) {
    auto it = interp[a].find(name);
    if (it == interp[a].end())
      throw Error("unknown move name '" + name + "' in one-step game");
    r.parts.emplace_back(a, it->second);
  }
  return r;
}

namespace {

// Visits f(m) for every completion of moveC honoring some committed
// joint move; stops early when visit returns false. Returns true iff
// every visited outcome returned true.
bool forEachHonored(const OneStepGame& g, const std::vector<AgentId>& c, const Commitment& o,
                    const std::vector<int>& moveC, const std::function<bool(int)>& visit) {
  std::vector<AgentId> free;
  for (int j = 0; j < g.nAgents; ++j) {
    if (std::find(c.begin(), c.end(), j) != c.end()) continue;
    if (std::find(o.agents.begin(), o.agents.end(), j) != o.agents.end()) continue;
    free.push_back(j);
  }
  std::vector<int> full(g.nAgents, 0);
  for (size_t i = 0; i < c.size(); ++i) full[c[i]] = moveC[i];
  for (const JointNamed& om : o.moves) {
    JointMove io = g.interpret(om);
    for (auto& [a, mv] : io.parts) full[a] = mv;
    std::vector<int> radix;
    for (AgentId j : free) radix.push_back(g.k[j]);
    std::vector<int> t(free.size(), 0);
    do {
      for (size_t i = 0; i < free.size(); ++i) full[free[i]] = t[i];
      if (!visit(g.outcome(full))) return false;
    } while (nextTuple(t, radix));
  }
  return true;
}

}  // namespace

bool liftingHolds(const ModalAtom& atom, const OneStepGame& g) {
  const Bitset& y = g.tau[atom.var];
  std::vector<int> radix;
  for (AgentId j : atom.coalition) radix.push_back(g.k[j]);
  std::vector<int> mc(atom.coalition.size(), 0);
  if (atom.box) {
    do {
      bool allIn = forEachHonored(g, atom.coalition, atom.commitment, mc,
                                  [&](int t) { return y.test(t); });
      if (allIn) return true;
    } while (nextTuple(mc, radix));
    return false;
  }
  // Diamond: every joint move of C admits some honored outcome in y.
  do {
    bool someIn = !forEachHonored(g, atom.coalition, atom.commitment, mc,
                                  [&](int t) { return !y.test(t); });
    if (!someIn) return false;
  } while (nextTuple(mc, radix));
  return true;
}

std::vector<std::vector<std::string>> occurringNames(const std::vector<ModalAtom>& xi,
                                                     int nAgents) {
  std::vector<std::vector<std::string>> occ(nAgents);
  for (const ModalAtom& a : xi)
    for (const JointNamed& jm : a.commitment.moves)
      for (auto& [ag, name] : jm.parts) occ[ag].push_back(name);
  for (auto& v : occ) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return occ;
}

namespace {

Bitset agentMask(const std::vector<AgentId>& agents, int n) {
  Bitset b(n);
  for (AgentId a : agents) b.set(a);
  return b;
}

struct Matcher {
  const std::vector<ModalAtom>& xi;
  int nAgents;
  std::function<bool(const RuleInstance&)> visit;
  long long cap;
  long long seen = 0;
  bool stopped = false;

  std::vector<int> boxIdx, diaIdx, grandIdx;
  std::vector<Bitset> cMask, oMask;  // per atom
  std::vector<std::vector<std::string>> occ;

  struct BoxSel {
    std::vector<int> idx;
    Bitset dMask, gMask;
  };
  std::vector<BoxSel> boxSels;
  struct GrandSel {
    std::vector<int> idx;
    Bitset hMask;
  };
  std::vector<GrandSel> grandSels;

  explicit Matcher(const std::vector<ModalAtom>& xi_, int n,
                   const std::function<bool(const RuleInstance&)>& v, long long cap_)
      : xi(xi_), nAgents(n), visit(v), cap(cap_) {
    occ = occurringNames(xi, nAgents);
    for (size_t i = 0; i < xi.size(); ++i) {
      cMask.push_back(agentMask(xi[i].coalition, nAgents));
      oMask.push_back(agentMask(xi[i].commitment.agents, nAgents));
      if (xi[i].box) {
        boxIdx.push_back(int(i));
      } else {
        diaIdx.push_back(int(i));
        if (xi[i].isGrand(nAgents)) grandIdx.push_back(int(i));
      }
    }
    collectBoxSels(0, {}, Bitset(nAgents), Bitset(nAgents));
    collectGrandSels(0, {}, Bitset(nAgents));
  }

  // All box subsets with pairwise disjoint coalitions (side condition 1).
  void collectBoxSels(size_t pos, std::vector<int> idx, Bitset dMask, Bitset gMask) {
    if (pos == boxIdx.size()) {
      boxSels.push_back({std::move(idx), std::move(dMask), std::move(gMask)});
      return;
    }
    collectBoxSels(pos + 1, idx, dMask, gMask);
    int b = boxIdx[pos];
    if (!cMask[b].intersects(dMask)) {
      idx.push_back(b);
      collectBoxSels(pos + 1, std::move(idx), dMask | cMask[b], gMask | oMask[b]);
    }
  }

  void collectGrandSels(size_t pos, std::vector<int> idx, Bitset hMask) {
    if (pos == grandIdx.size()) {
      grandSels.push_back({std::move(idx), std::move(hMask)});
      return;
    }
    collectGrandSels(pos + 1, idx, hMask);
    int d = grandIdx[pos];
    idx.push_back(d);
    collectGrandSels(pos + 1, std::move(idx), hMask | oMask[d]);
  }

  void bump() {
    if (++seen > cap) throw BudgetExceeded("rule instance enumeration exceeded budget");
  }

  // Iterates all joint explicit moves over `domain` built from occurring
  // names; fn returns false to stop. Returns false if stopped.
  bool forEachL(const Bitset& domain, const std::function<bool(const JointNamed&)>& fn) {
    std::vector<int> agents = domain.toVector();
    std::vector<int> radix;
    for (int a : agents) {
      if (occ[a].empty()) return true;  // no candidate name: no admissible l
      radix.push_back(int(occ[a].size()));
    }
    std::vector<int> t(agents.size(), 0);
    do {
      JointNamed l;
      for (size_t i = 0; i < agents.size(); ++i)
        l.parts.emplace_back(agents[i], occ[agents[i]][t[i]]);
      if (!fn(l)) return false;
    } while (nextTuple(t, radix));
    return true;
  }

  static std::vector<int> sortedVars(std::vector<int> vars) {
    std::sort(vars.begin(), vars.end());
    vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
    return vars;
  }

  void run() {
    // Instances with the synthetic distinguished literal ⟨N,{()}⟩⊤:
    // index sets are full, so the single l must fit the whole premise.
    for (const BoxSel& bs : boxSels) {
      for (const GrandSel& gs : grandSels) {
        if (stopped) return;
        if (bs.idx.empty() && gs.idx.empty()) continue;
        Bitset lMask = bs.gMask | gs.hMask;
        if (bs.dMask.intersects(lMask)) continue;  // condition 3
        bool go = forEachL(lMask, [&](const JointNamed& l) {
          bump();
          for (int gdi : gs.idx)
            if (!compatibleNamed(xi[gdi].commitment.moves[0], l)) return true;
          for (int bi : bs.idx) {
            bool ok = false;
            for (const JointNamed& p : xi[bi].commitment.moves)
              if (compatibleNamed(p, l)) {
                ok = true;
                break;
              }
            if (!ok) return true;
          }
          RuleInstance inst;
          inst.synthetic = true;
          inst.boxes = bs.idx;
          inst.grands = gs.idx;
          inst.l = l;
          std::vector<int> vars;
          for (int bi : bs.idx) vars.push_back(xi[bi].var);
          for (int gdi : gs.idx) vars.push_back(xi[gdi].var);
          inst.conclusions.push_back({-1, sortedVars(std::move(vars))});
          return visit(inst);
        });
        if (!go) {
          stopped = true;
          return;
        }
      }
    }

    // Instances with a real distinguished diamond ⟨E,Q_K⟩b.
    for (int d : diaIdx) {
      Bitset eMask = cMask[d];
      Bitset ekMask = eMask | oMask[d];
      for (const BoxSel& bs : boxSels) {
        if (!bs.dMask.subsetOf(eMask)) continue;  // condition 4
        for (const GrandSel& gs : grandSels) {
          if (stopped) return;
          if (std::find(gs.idx.begin(), gs.idx.end(), d) != gs.idx.end()) continue;
          Bitset lMask = bs.gMask | gs.hMask;
          if (bs.dMask.intersects(lMask)) continue;  // condition 3
          if (!lMask.subsetOf(ekMask)) continue;     // condition 5
          bool go = forEachL(eMask & lMask, [&](const JointNamed& l) {
            bump();
            RuleInstance inst;
            inst.boxes = bs.idx;
            inst.distinguished = d;
            inst.grands = gs.idx;
            inst.l = l;
            const auto& q = xi[d].commitment.moves;
            for (size_t qi = 0; qi < q.size(); ++qi) {
              std::vector<int> vars{xi[d].var};
              for (int bi : bs.idx)
                for (const JointNamed& p : xi[bi].commitment.moves)
                  if (compatibleNamed(p, q[qi]) && compatibleNamed(p, l)) {
                    vars.push_back(xi[bi].var);
                    break;
                  }
              for (int gdi : gs.idx) {
                const JointNamed& r = xi[gdi].commitment.moves[0];
                if (compatibleNamed(r, q[qi]) && compatibleNamed(r, l))
                  vars.push_back(xi[gdi].var);
              }
              inst.conclusions.push_back({int(qi), sortedVars(std::move(vars))});
            }
            return visit(inst);
          });
          if (!go) {
            stopped = true;
            return;
          }
        }
      }
    }
  }
};

bool conclusionNonempty(const RuleInstance::Conclusion& c, const std::vector<Bitset>& tau,
                        int carrier) {
  Bitset acc = Bitset::full(carrier);
  for (int v : c.vars) {
    acc &= tau[v];
    if (acc.none()) return false;
  }
  return acc.any();
}

}  // namespace

void matchRules(const std::vector<ModalAtom>& xi, int nAgents,
                const std::function<bool(const RuleInstance&)>& visit, long long candidateCap) {
  Matcher m(xi, nAgents, visit, candidateCap);
  m.run();
}

std::vector<RuleInstance> matchRulesAll(const std::vector<ModalAtom>& xi, int nAgents,
                                        long long candidateCap) {
  std::vector<RuleInstance> out;
  matchRules(
      xi, nAgents,
      [&](const RuleInstance& inst) {
        out.push_back(inst);
        return true;
      },
      candidateCap);
  return out;
}

bool oneStepTableauSatGeneral(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                              int carrier, int nAgents, long long candidateCap) {
  bool sat = true;
  matchRules(
      xi, nAgents,
      [&](const RuleInstance& inst) {
        for (const auto& c : inst.conclusions)
          if (conclusionNonempty(c, tau, carrier)) return true;
        sat = false;
        return false;
      },
      candidateCap);
  return sat;
}

bool oneStepSatGrandFree(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                         int carrier, int nAgents, long long candidateCap) {
  for (const ModalAtom& a : xi)
    if (!a.box && a.isGrand(nAgents)) throw InternalError("grand atom on grand-free fast path");
  // Without grand diamonds the grand premise slots stay empty, so an
  // instance is a disjoint box family plus at most one diamond.
  Matcher m(xi, nAgents, {}, candidateCap);
  auto conclusionOk = [&](const std::vector<int>& vars) {
    Bitset acc = Bitset::full(carrier);
    for (int v : vars) {
      acc &= tau[v];
      if (acc.none()) return false;
    }
    return acc.any();
  };
  // Synthetic distinguished: premise is a box family; the conclusion
  // carries every premise variable.
  for (const Matcher::BoxSel& bs : m.boxSels) {
    if (bs.idx.empty()) continue;
    if (bs.dMask.intersects(bs.gMask)) continue;
    std::vector<int> vars;
    for (int bi : bs.idx) vars.push_back(xi[bi].var);
    if (conclusionOk(vars)) continue;  // this and all l-variants succeed
    bool anyL = false;
    m.forEachL(bs.gMask, [&](const JointNamed& l) {
      m.bump();
      for (int bi : bs.idx) {
        bool ok = false;
        for (const JointNamed& p : xi[bi].commitment.moves)
          if (compatibleNamed(p, l)) {
            ok = true;
            break;
          }
        if (!ok) return true;
      }
      anyL = true;
      return false;
    });
    if (anyL) return false;  // admissible instance with empty conclusion
  }
  for (int d : m.diaIdx) {
    Bitset eMask = m.cMask[d];
    Bitset ekMask = eMask | m.oMask[d];
    for (const Matcher::BoxSel& bs : m.boxSels) {
      if (!bs.dMask.subsetOf(eMask)) continue;
      if (bs.dMask.intersects(bs.gMask)) continue;
      if (!bs.gMask.subsetOf(ekMask)) continue;
      bool bad = !m.forEachL(eMask & bs.gMask, [&](const JointNamed& l) {
        m.bump();
        const auto& q = xi[d].commitment.moves;
        for (size_t qi = 0; qi < q.size(); ++qi) {
          std::vector<int> vars{xi[d].var};
          for (int bi : bs.idx)
            for (const JointNamed& p : xi[bi].commitment.moves)
              if (compatibleNamed(p, q[qi]) && compatibleNamed(p, l)) {
                vars.push_back(xi[bi].var);
                break;
              }
          if (conclusionOk(vars)) return true;  // this instance survives
        }
        return false;  // failing instance found
      });
      if (bad) return false;
    }
  }
  return true;
}

bool oneStepTableauSat(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                       int carrier, int nAgents, long long candidateCap) {
  bool anyGrand = false;
  for (const ModalAtom& a : xi)
    if (!a.box && a.isGrand(nAgents)) {
      anyGrand = true;
      break;
    }
  if (!anyGrand) return oneStepSatGrandFree(xi, tau, carrier, nAgents, candidateCap);
  return oneStepTableauSatGeneral(xi, tau, carrier, nAgents, candidateCap);
}

}  // namespace amcdes
