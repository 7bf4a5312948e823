#include "support/gen.hpp"

#include <algorithm>
#include <set>

namespace amcdes::testgen {

int pick(Rng& rng, int lo, int hi) {
  return int(std::uniform_int_distribution<long long>(lo, hi)(rng));
}

bool chance(Rng& rng, int num, int den) { return pick(rng, 1, den) <= num; }

namespace {

// Distinct name pools per agent ("a","a2" for agent 0, "b","b2" for agent 1,
// ...), so inferred signatures stay unambiguous.
std::vector<std::string> namePool(int agent, int count) {
  std::vector<std::string> out;
  std::string base(1, char('a' + agent));
  for (int i = 0; i < count; ++i) out.push_back(i == 0 ? base : base + std::to_string(i + 1));
  return out;
}

std::vector<int> maskToVec(int mask, int n) {
  std::vector<int> v;
  for (int i = 0; i < n; ++i)
    if (mask & (1 << i)) v.push_back(i);
  return v;
}

}  // namespace

Signature randomSignature(Rng& rng, int minAgents, int maxAgents, int maxNames) {
  Signature sig;
  int n = pick(rng, minAgents, maxAgents);
  for (int j = 0; j < n; ++j) {
    sig.agents.push_back(std::to_string(j + 1));
    sig.moves.push_back(namePool(j, pick(rng, 0, maxNames)));
  }
  return sig;
}

Cgses randomModel(Rng& rng, const Signature& sig, int maxStates, int maxK,
                  const std::vector<std::string>& atomPool) {
  Cgses s;
  s.sig = sig;
  int n = pick(rng, 1, maxStates);
  int nA = sig.nAgents();
  for (int w = 0; w < n; ++w) {
    s.stateNames.push_back("s" + std::to_string(w));
    s.stateIndex[s.stateNames.back()] = w;
    StateData d;
    for (const std::string& a : atomPool)
      if (chance(rng, 1, 2)) d.atoms.insert(a);
    for (int j = 0; j < nA; ++j) d.k.push_back(pick(rng, 1, maxK));
    d.outcome.resize(tupleCount(d.k));
    for (int& o : d.outcome) o = pick(rng, 0, n - 1);
    d.interp.resize(nA);
    for (int j = 0; j < nA; ++j)
      for (const std::string& name : sig.moves[j]) d.interp[j][name] = pick(rng, 0, d.k[j] - 1);
    s.states.push_back(std::move(d));
  }
  s.validate();
  return s;
}

CoPair randomCoPair(Rng& rng, const Signature& sig) {
  int n = sig.nAgents();
  int cMask = pick(rng, 0, (1 << n) - 1);
  int dCand = 0;
  for (int j = 0; j < n; ++j)
    if (!(cMask & (1 << j)) && !sig.moves[j].empty()) dCand |= 1 << j;
  int dMask = 0;
  for (int j = 0; j < n; ++j)
    if ((dCand & (1 << j)) && chance(rng, 1, 2)) dMask |= 1 << j;

  CoPair cp;
  cp.coalition = maskToVec(cMask, n);
  if (dMask == 0) {
    cp.commitment = Commitment::empty();
    return cp;
  }
  cp.commitment.agents = maskToVec(dMask, n);
  std::set<JointNamed> moves;
  int want = pick(rng, 1, 2);
  for (int t = 0; t < want; ++t) {
    JointNamed jm;
    for (int j : cp.commitment.agents) {
      const auto& pool = sig.moves[j];
      jm.parts.emplace_back(j, pool[pick(rng, 0, int(pool.size()) - 1)]);
    }
    moves.insert(jm);
  }
  // A grand-coalition modality cannot be disjunctive.
  bool grand = int(cp.coalition.size() + cp.commitment.agents.size()) == n;
  cp.commitment.moves.assign(moves.begin(), moves.end());
  if (grand && cp.commitment.moves.size() > 1) cp.commitment.moves.resize(1);
  return cp;
}

namespace {

FormulaPtr genFormula(Rng& rng, const Signature& sig, int depth,
                      const std::vector<std::string>& atomPool, std::vector<std::string>& scope,
                      int& binderCount) {
  auto literal = [&]() -> FormulaPtr {
    int top = scope.empty() ? 3 : 5;
    switch (pick(rng, 0, top)) {
      case 0: return mkTop();
      case 1: return mkBot();
      case 2: return mkAtom(atomPool[pick(rng, 0, int(atomPool.size()) - 1)]);
      case 3: return mkNegAtom(atomPool[pick(rng, 0, int(atomPool.size()) - 1)]);
      default: return mkVar(scope[pick(rng, 0, int(scope.size()) - 1)]);
    }
  };
  if (depth <= 0) return literal();
  switch (pick(rng, 0, 9)) {
    case 0:
      return literal();
    case 1:
    case 2: {
      auto a = genFormula(rng, sig, depth - 1, atomPool, scope, binderCount);
      auto b = genFormula(rng, sig, depth - 1, atomPool, scope, binderCount);
      return mkAnd(a, b);
    }
    case 3:
    case 4: {
      auto a = genFormula(rng, sig, depth - 1, atomPool, scope, binderCount);
      auto b = genFormula(rng, sig, depth - 1, atomPool, scope, binderCount);
      return mkOr(a, b);
    }
    case 5:
    case 6:
    case 7: {
      CoPair cp = randomCoPair(rng, sig);
      auto body = genFormula(rng, sig, depth - 1, atomPool, scope, binderCount);
      return chance(rng, 1, 2) ? mkBox(cp.coalition, cp.commitment, body, sig.nAgents())
                               : mkDiamond(cp.coalition, cp.commitment, body, sig.nAgents());
    }
    default: {
      // Globally distinct binder names keep substitution capture-free.
      std::string x = "x" + std::to_string(binderCount++);
      scope.push_back(x);
      auto body = genFormula(rng, sig, depth - 1, atomPool, scope, binderCount);
      scope.pop_back();
      return chance(rng, 1, 2) ? mkMu(x, body) : mkNu(x, body);
    }
  }
}

}  // namespace

FormulaPtr randomFormula(Rng& rng, const Signature& sig, int depth,
                         const std::vector<std::string>& atomPool) {
  std::vector<std::string> scope;
  int binderCount = 0;
  return genFormula(rng, sig, depth, atomPool, scope, binderCount);
}

OneStepInstance randomOneStep(Rng& rng, int maxAgents, int maxAtoms, int maxCarrier,
                              int maxNames) {
  OneStepInstance inst;
  inst.nAgents = pick(rng, 1, maxAgents);
  inst.carrier = pick(rng, 1, maxCarrier);
  std::vector<std::vector<std::string>> pools;
  for (int j = 0; j < inst.nAgents; ++j) pools.push_back(namePool(j, pick(rng, 0, maxNames)));

  int nAtoms = pick(rng, 1, maxAtoms);
  for (int i = 0; i < nAtoms; ++i) {
    ModalAtom a;
    a.box = chance(rng, 1, 2);
    int cMask = pick(rng, 0, (1 << inst.nAgents) - 1);
    int dCand = 0;
    for (int j = 0; j < inst.nAgents; ++j)
      if (!(cMask & (1 << j)) && !pools[j].empty()) dCand |= 1 << j;
    int dMask = 0;
    for (int j = 0; j < inst.nAgents; ++j)
      if ((dCand & (1 << j)) && chance(rng, 1, 2)) dMask |= 1 << j;
    a.coalition = maskToVec(cMask, inst.nAgents);
    if (dMask == 0) {
      a.commitment = Commitment::empty();
    } else {
      a.commitment.agents = maskToVec(dMask, inst.nAgents);
      std::set<JointNamed> moves;
      int want = pick(rng, 1, 2);
      for (int t = 0; t < want; ++t) {
        JointNamed jm;
        for (int j : a.commitment.agents)
          jm.parts.emplace_back(j, pools[j][pick(rng, 0, int(pools[j].size()) - 1)]);
        moves.insert(jm);
      }
      a.commitment.moves.assign(moves.begin(), moves.end());
      if (a.isGrand(inst.nAgents) && a.commitment.moves.size() > 1) a.commitment.moves.resize(1);
    }
    a.var = i;
    inst.xi.push_back(std::move(a));

    Bitset t(inst.carrier);
    if (!chance(rng, 1, 8)) {
      int mask = pick(rng, 1, (1 << inst.carrier) - 1);
      for (int w = 0; w < inst.carrier; ++w)
        if (mask & (1 << w)) t.set(w);
    }
    inst.tau.push_back(t);
  }
  return inst;
}

void forEachTwoAgentInstance(int maxAtoms, int maxCarrier,
                             const std::function<void(const OneStepInstance&)>& visit) {
  struct Shape {
    bool box;
    std::vector<AgentId> c;
    Commitment o;
  };
  std::vector<Shape> shapes;
  const std::string names[2] = {"a", "b"};
  for (int box = 0; box < 2; ++box)
    for (int cMask = 0; cMask < 4; ++cMask)
      for (int dMask = 0; dMask < 4; ++dMask) {
        if (dMask & cMask) continue;
        Commitment o = Commitment::empty();
        if (dMask) {
          o.agents = maskToVec(dMask, 2);
          JointNamed jm;
          for (int j : o.agents) jm.parts.emplace_back(j, names[j]);
          o.moves = {jm};
        }
        shapes.push_back({box == 0, maskToVec(cMask, 2), o});
      }

  for (int carrier = 1; carrier <= maxCarrier; ++carrier) {
    std::vector<std::pair<int, int>> pairs;  // (shape index, tau mask)
    for (int s = 0; s < int(shapes.size()); ++s)
      for (int mask = 0; mask < (1 << carrier); ++mask) pairs.emplace_back(s, mask);

    OneStepInstance inst;
    inst.carrier = carrier;
    inst.nAgents = 2;
    std::function<void(int)> rec = [&](int start) {
      visit(inst);
      if (int(inst.xi.size()) == maxAtoms) return;
      for (int i = start; i < int(pairs.size()); ++i) {
        const Shape& sh = shapes[pairs[i].first];
        ModalAtom a;
        a.box = sh.box;
        a.coalition = sh.c;
        a.commitment = sh.o;
        a.var = int(inst.xi.size());
        inst.xi.push_back(std::move(a));
        Bitset t(carrier);
        for (int w = 0; w < carrier; ++w)
          if (pairs[i].second & (1 << w)) t.set(w);
        inst.tau.push_back(t);
        rec(i);
        inst.xi.pop_back();
        inst.tau.pop_back();
      }
    };
    rec(0);
  }
}

ParityGame randomParityGame(Rng& rng, int nodes, int maxPriority) {
  ParityGame g;
  for (int v = 0; v < nodes; ++v)
    g.addNode(chance(rng, 1, 2) ? Player::Eloise : Player::Abelard, pick(rng, 0, maxPriority));
  for (int u = 0; u < nodes; ++u)
    for (int v = 0; v < nodes; ++v)
      if (chance(rng, 1, 2)) g.addEdge(u, v);
  return g;
}

void forEachGame(int n, int maxPriority, const std::function<void(const ParityGame&)>& visit) {
  int perNode = 2 * (maxPriority + 1);
  std::vector<int> conf(n, 0), radixConf(n, perNode);
  do {
    long long edgeSets = 1LL << (n * n);
    for (long long e = 0; e < edgeSets; ++e) {
      ParityGame g;
      for (int v = 0; v < n; ++v)
        g.addNode(conf[v] % 2 == 0 ? Player::Eloise : Player::Abelard, conf[v] / 2);
      for (int u = 0; u < n; ++u)
        for (int v = 0; v < n; ++v)
          if (e & (1LL << (u * n + v))) g.addEdge(u, v);
      visit(g);
    }
  } while (nextTuple(conf, radixConf));
}

GenericNPA randomNpa(Rng& rng, int maxStates, int maxLetters, int maxPriority) {
  GenericNPA a;
  a.nStates = pick(rng, 1, maxStates);
  a.nLetters = pick(rng, 1, maxLetters);
  for (int s = 0; s < a.nStates; ++s) {
    a.priority.push_back(pick(rng, 0, maxPriority));
    if (chance(rng, 1, 2)) a.initial.push_back(s);
  }
  if (a.initial.empty()) a.initial.push_back(pick(rng, 0, a.nStates - 1));
  a.delta.assign(a.nStates, std::vector<std::vector<int>>(a.nLetters));
  for (int s = 0; s < a.nStates; ++s)
    for (int l = 0; l < a.nLetters; ++l)
      for (int t = 0; t < a.nStates; ++t)
        if (chance(rng, 2, 5)) a.delta[s][l].push_back(t);
  return a;
}

}  // namespace amcdes::testgen
