#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "amcdes/extract.hpp"
#include "amcdes/sat.hpp"

namespace amcdes {

// ---------------------------------------------------------------------------
// Guarding.
// ---------------------------------------------------------------------------

namespace {

FormulaPtr withChildren(const FormulaPtr& f, FormulaPtr l, FormulaPtr r) {
  if (f->left == l && f->right == r) return f;
  auto g = std::make_shared<Formula>(*f);
  g->left = std::move(l);
  g->right = std::move(r);
  return g;
}

// Replaces occurrences of x reachable without crossing a modality. Crossing
// another binder does not guard, but rebinding x shadows it.
FormulaPtr replaceUnguarded(const FormulaPtr& f, const std::string& x, const FormulaPtr& rep) {
  switch (f->kind) {
    case FKind::Var:
      return f->name == x ? rep : f;
    case FKind::And:
    case FKind::Or:
      return withChildren(f, replaceUnguarded(f->left, x, rep), replaceUnguarded(f->right, x, rep));
    case FKind::Mu:
    case FKind::Nu:
      if (f->name == x) return f;
      return withChildren(f, replaceUnguarded(f->left, x, rep), nullptr);
    default:
      return f;  // literals and modalities
  }
}

FormulaPtr guardRec(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::And:
    case FKind::Or:
      return withChildren(f, guardRec(f->left), guardRec(f->right));
    case FKind::Box:
    case FKind::Diamond:
      return withChildren(f, guardRec(f->left), nullptr);
    case FKind::Mu:
    case FKind::Nu: {
      FormulaPtr body = guardRec(f->left);
      FormulaPtr unit = f->kind == FKind::Mu ? mkBot() : mkTop();
      return withChildren(f, replaceUnguarded(body, f->name, unit), nullptr);
    }
    default:
      return f;
  }
}

// Collects variables with an occurrence not under any modality.
void unguardedVars(const FormulaPtr& f, std::set<std::string>& out, bool& allGuarded) {
  switch (f->kind) {
    case FKind::Var:
      out.insert(f->name);
      return;
    case FKind::And:
    case FKind::Or:
      unguardedVars(f->left, out, allGuarded);
      unguardedVars(f->right, out, allGuarded);
      return;
    case FKind::Box:
    case FKind::Diamond: {
      std::set<std::string> inner;
      unguardedVars(f->left, inner, allGuarded);
      return;
    }
    case FKind::Mu:
    case FKind::Nu: {
      std::set<std::string> inner;
      unguardedVars(f->left, inner, allGuarded);
      if (inner.count(f->name)) allGuarded = false;
      inner.erase(f->name);
      out.insert(inner.begin(), inner.end());
      return;
    }
    default:
      return;
  }
}

}  // namespace

FormulaPtr guardedTransform(const FormulaPtr& f) { return guardRec(f); }

bool isGuarded(const FormulaPtr& f) {
  bool ok = true;
  std::set<std::string> tmp;
  unguardedVars(f, tmp, ok);
  return ok;
}

// ---------------------------------------------------------------------------
// Tableau game construction.
// ---------------------------------------------------------------------------

namespace {

bool expandable(FKind k) {
  return k == FKind::And || k == FKind::Or || k == FKind::Mu || k == FKind::Nu;
}

}  // namespace

TableauGame buildTableauGame(const FormulaPtr& guarded, const Signature& sig,
                             const Budgets& budgets) {
  TableauGame tg;
  tg.cl = closure(guarded, sig, budgets.closureSize);
  const Closure& cl = tg.cl;
  const int n = int(cl.items.size());
  const int nA = sig.nAgents();
  DetTracker dt(cl, budgets);
  tg.trackerMode = dt.mode();

  auto newNode = [&](Player owner, int pri, TableauNode inf) {
    if (tg.pg.size() >= budgets.gameNodes)
      throw BudgetExceeded("tableau game node cap exceeded");
    int id = tg.pg.addNode(owner, pri);
    tg.info.push_back(std::move(inf));
    tg.instanceNodes.emplace_back();
    return id;
  };

  std::map<std::pair<Bitset, int>, int> seqIndex;
  std::queue<int> todo;
  auto mkSequent = [&](const Bitset& seq, int det) {
    auto key = std::make_pair(seq, det);
    auto it = seqIndex.find(key);
    if (it != seqIndex.end()) return it->second;
    TableauNode inf;
    inf.kind = TableauNode::Kind::Sequent;
    inf.seq = seq;
    inf.det = det;
    int id = newNode(Player::Abelard, 0, std::move(inf));
    seqIndex.emplace(std::move(key), id);
    todo.push(id);
    return id;
  };

  std::map<Bitset, int> memoIndex;  // modal item set -> instanceSets slot
  auto instancesFor = [&](const Bitset& modal) {
    auto it = memoIndex.find(modal);
    if (it != memoIndex.end()) return it->second;
    std::vector<ModalAtom> atoms;
    modal.forEach([&](int i) {
      const FormulaPtr& g = cl.items[i].f;
      ModalAtom a;
      a.box = g->kind == FKind::Box;
      a.coalition = g->coalition;
      a.commitment = g->commitment;
      a.var = cl.succ[i][0];
      atoms.push_back(std::move(a));
    });
    tg.instanceSets.push_back(matchRulesAll(atoms, nA, budgets.ruleInstances));
    memoIndex.emplace(modal, int(tg.instanceSets.size()) - 1);
    return int(tg.instanceSets.size()) - 1;
  };

  auto attachStep = [&](int from, const Bitset& nextSeq, int det, const BranchLetter& letter,
                        int conclIdx) {
    auto [det2, pri] = dt.step(det, letter);
    int child = mkSequent(nextSeq, det2);
    TableauNode inf;
    inf.kind = TableauNode::Kind::Step;
    inf.conclIdx = conclIdx;
    int step = newNode(Player::Abelard, pri, std::move(inf));
    tg.pg.addEdge(from, step);
    tg.pg.addEdge(step, child);
  };

  Bitset s0(n);
  s0.set(cl.root);
  tg.initial = mkSequent(s0, dt.initialState());

  while (!todo.empty()) {
    int v = todo.front();
    todo.pop();
    Bitset seq = tg.info[v].seq;
    int det = tg.info[v].det;

    bool clash = false;
    std::set<std::string> pos, neg;
    int expandIdx = -1;
    Bitset modal(n);
    seq.forEach([&](int i) {
      const FormulaPtr& g = cl.items[i].f;
      if (g->kind == FKind::Bot) clash = true;
      if (g->kind == FKind::Atom) pos.insert(g->name);
      if (g->kind == FKind::NegAtom) neg.insert(g->name);
      if (expandIdx < 0 && expandable(g->kind)) expandIdx = i;
      if (g->isModal()) modal.set(i);
    });
    for (const std::string& p : pos)
      if (neg.count(p)) clash = true;

    if (clash) {
      tg.pg.nodes[v].owner = Player::Eloise;  // stuck: the prover loses here
      tg.info[v].clash = true;
      continue;
    }

    if (expandIdx >= 0) {
      int t = expandIdx;
      FKind k = cl.items[t].f->kind;
      if (k == FKind::And) {
        Bitset nx = seq;
        nx.reset(t);
        nx.set(cl.succ[t][0]);
        nx.set(cl.succ[t][1]);
        attachStep(v, nx, det, {BranchLetter::Kind::AndExp, t, Bitset()}, -1);
      } else if (k == FKind::Or) {
        tg.pg.nodes[v].owner = Player::Eloise;
        for (int side = 0; side < 2; ++side) {
          Bitset nx = seq;
          nx.reset(t);
          nx.set(cl.succ[t][side]);
          attachStep(v, nx, det,
                     {side == 0 ? BranchLetter::Kind::OrLeft : BranchLetter::Kind::OrRight, t,
                      Bitset()},
                     -1);
        }
      } else {
        Bitset nx = seq;
        nx.reset(t);
        nx.set(cl.succ[t][0]);
        attachStep(v, nx, det, {BranchLetter::Kind::Unfold, t, Bitset()}, -1);
      }
      continue;
    }

    if (modal.none()) {
      tg.info[v].stateLike = true;  // consistent literals only: the prover wins
      tg.info[v].leaf = true;
      continue;
    }

    int memo = instancesFor(modal);
    const std::vector<RuleInstance>& instances = tg.instanceSets[memo];
    tg.info[v].stateLike = true;
    tg.info[v].memo = memo;
    if (instances.empty()) {
      tg.info[v].leaf = true;  // no applicable instance constrains this state
      continue;
    }
    for (int ii = 0; ii < int(instances.size()); ++ii) {
      TableauNode inf;
      inf.kind = TableauNode::Kind::Instance;
      inf.instanceIdx = ii;
      int instNode = newNode(Player::Eloise, 0, std::move(inf));
      tg.pg.addEdge(v, instNode);
      tg.instanceNodes[v].push_back(instNode);
      for (int ci = 0; ci < int(instances[ii].conclusions.size()); ++ci) {
        Bitset nx(n), cont(n);
        for (int var : instances[ii].conclusions[ci].vars) {
          nx.set(var);
          cont.set(var);
        }
        attachStep(instNode, nx, det, {BranchLetter::Kind::Modal, -1, cont}, ci);
      }
    }
  }

  tg.detStates = dt.numStates();
  return tg;
}

// ---------------------------------------------------------------------------
// Model extraction.
// ---------------------------------------------------------------------------

Extraction extractModel(const TableauGame& tg, const Solution& sol, const Signature& sig,
                        const Budgets& budgets) {
  if (!sol.winEloise.test(tg.initial))
    throw Error("model extraction requires a winning prover strategy at the root");
  const Closure& cl = tg.cl;
  const int n = int(cl.items.size());
  const int nA = sig.nAgents();

  auto redirect = [&](int v) {
    std::set<int> seen;
    while (!tg.info[v].stateLike) {
      if (!seen.insert(v).second) throw InternalError("propositional redirection cycled");
      const ParityGame::Node& nd = tg.pg.nodes[v];
      if (nd.owner == Player::Eloise) {
        int nx = sol.strategyEloise[v];
        if (nx < 0) throw InternalError("prover strategy missing on its winning region");
        v = nx;
      } else {
        if (nd.succ.empty()) throw InternalError("redirection reached a refuter dead end");
        v = nd.succ[0];
      }
    }
    return v;
  };

  std::map<int, int> stateOf;
  std::vector<int> stateNode;
  auto stateId = [&](int v) {
    auto it = stateOf.find(v);
    if (it != stateOf.end()) return it->second;
    int s = int(stateNode.size());
    stateOf.emplace(v, s);
    stateNode.push_back(v);
    return s;
  };

  int init = stateId(redirect(tg.initial));

  Cgses model;
  model.sig = sig;
  for (int s = 0; s < int(stateNode.size()); ++s) {
    int v = stateNode[s];
    const TableauNode& inf = tg.info[v];
    StateData sd;
    inf.seq.forEach([&](int i) {
      if (cl.items[i].f->kind == FKind::Atom) sd.atoms.insert(cl.items[i].f->name);
    });

    if (inf.leaf) {
      sd.k.assign(nA, 1);
      sd.outcome = {s};
      sd.interp.resize(nA);
      for (int a = 0; a < nA; ++a)
        for (const std::string& name : sig.moves[a]) sd.interp[a][name] = 0;
      model.states.push_back(std::move(sd));
      model.stateNames.push_back("s" + std::to_string(s));
      continue;
    }

    const std::vector<RuleInstance>& instances = tg.instanceSets[inf.memo];
    std::vector<ModalAtom> atoms;
    inf.seq.forEach([&](int i) {
      const FormulaPtr& g = cl.items[i].f;
      if (!g->isModal()) return;
      ModalAtom a;
      a.box = g->kind == FKind::Box;
      a.coalition = g->coalition;
      a.commitment = g->commitment;
      a.var = cl.succ[i][0];
      atoms.push_back(std::move(a));
    });

    int m = int(instances.size());
    std::vector<Bitset> tau(n, Bitset(m));
    std::vector<int> succState(m, -1);
    for (int ii = 0; ii < m; ++ii) {
      int instNode = tg.instanceNodes[v][ii];
      int stepNode = sol.strategyEloise[instNode];
      if (stepNode < 0) throw InternalError("prover strategy missing at a rule instance");
      int concl = tg.info[stepNode].conclIdx;
      for (int var : instances[ii].conclusions[concl].vars) tau[var].set(ii);
      succState[ii] = stateId(redirect(tg.pg.nodes[stepNode].succ[0]));
    }

    OneStepGame g = extractOneStepModel(atoms, tau, m, nA, budgets.workSteps);
    sd.k = g.k;
    sd.outcome.resize(g.f.size());
    for (size_t idx = 0; idx < g.f.size(); ++idx) sd.outcome[idx] = succState[g.f[idx]];
    // The one-step extraction names moves uniformly across agents; the model
    // keeps only each agent's own declared names (absent ones default to 0).
    sd.interp.resize(nA);
    for (int a = 0; a < nA; ++a)
      for (const std::string& name : sig.moves[a]) {
        auto it = g.interp[a].find(name);
        sd.interp[a][name] = it == g.interp[a].end() ? 0 : it->second;
      }
    model.states.push_back(std::move(sd));
    model.stateNames.push_back("s" + std::to_string(s));
  }

  for (int s = 0; s < int(model.stateNames.size()); ++s) model.stateIndex[model.stateNames[s]] = s;
  model.validate();
  return Extraction{std::move(model), "s" + std::to_string(init)};
}

}  // namespace amcdes
