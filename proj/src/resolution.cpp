#include "amcdes/resolution.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <sstream>

namespace amcdes {

// ------------------------------------------------------------------- terms

Term Term::var(int id, int sort) {
  Term t;
  t.kind = Kind::Var;
  t.id = id;
  t.sort = sort;
  return t;
}
Term Term::eConst(int boxId, int sort) {
  Term t;
  t.kind = Kind::EConst;
  t.id = boxId;
  t.sort = sort;
  return t;
}
Term Term::nConst(std::string name, int sort) {
  Term t;
  t.kind = Kind::NConst;
  t.name = std::move(name);
  t.sort = sort;
  return t;
}
Term Term::app(int funId, int sort, std::vector<AgentId> argSorts, std::vector<Term> args) {
  Term t;
  t.kind = Kind::App;
  t.id = funId;
  t.sort = sort;
  t.argSorts = std::move(argSorts);
  t.args = std::move(args);
  return t;
}

bool Term::operator==(const Term& o) const { return termCompare(*this, o) == 0; }

int termCompare(const Term& a, const Term& b) {
  if (a.kind != b.kind) return a.kind < b.kind ? -1 : 1;
  if (a.sort != b.sort) return a.sort < b.sort ? -1 : 1;
  if (a.id != b.id) return a.id < b.id ? -1 : 1;
  if (int c = a.name.compare(b.name)) return c < 0 ? -1 : 1;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size() ? -1 : 1;
  for (size_t i = 0; i < a.args.size(); ++i)
    if (int c = termCompare(a.args[i], b.args[i])) return c;
  return 0;
}

bool occursIn(int varId, const Term& t) {
  if (t.kind == Term::Kind::Var) return t.id == varId;
  for (const Term& a : t.args)
    if (occursIn(varId, a)) return true;
  return false;
}

void collectVars(const Term& t, std::set<int>& out) {
  if (t.kind == Term::Kind::Var) out.insert(t.id);
  for (const Term& a : t.args) collectVars(a, out);
}

std::string showTerm(const Term& t) {
  switch (t.kind) {
    case Term::Kind::Var: return "x" + std::to_string(t.id);
    case Term::Kind::EConst: return "e" + std::to_string(t.id);
    case Term::Kind::NConst: return t.name;
    case Term::Kind::App: {
      std::string s = "g" + std::to_string(t.id) + "(";
      for (size_t i = 0; i < t.args.size(); ++i) {
        if (i) s += ",";
        s += showTerm(t.args[i]);
      }
      return s + ")";
    }
  }
  return "?";
}

std::string showTuple(const TermTuple& t) {
  std::string s = "(";
  for (size_t i = 0; i < t.size(); ++i) {
    if (i) s += ",";
    s += showTerm(t[i]);
  }
  return s + ")";
}

Term Substitution::apply(const Term& t) const {
  if (t.kind == Term::Kind::Var) {
    auto it = map.find(t.id);
    return it == map.end() ? t : it->second;
  }
  if (t.kind != Term::Kind::App) return t;
  Term r = t;
  for (Term& a : r.args) a = apply(a);
  return r;
}

TermTuple Substitution::apply(const TermTuple& t) const {
  TermTuple r = t;
  for (Term& x : r) x = apply(x);
  return r;
}

std::string Substitution::show() const {
  std::string s = "{";
  bool first = true;
  for (auto& [v, t] : map) {
    if (!first) s += ",";
    first = false;
    s += "x" + std::to_string(v) + "=" + showTerm(t);
  }
  return s + "}";
}

UnifyResult unifyTuples(const std::vector<TermTuple>& tuples) {
  UnifyResult res;
  if (tuples.size() < 2) return res;
  std::deque<std::pair<Term, Term>> eqs;
  for (size_t k = 1; k < tuples.size(); ++k) {
    if (tuples[k].size() != tuples[0].size())
      throw InternalError("unification over tuples of different width");
    for (size_t i = 0; i < tuples[0].size(); ++i) eqs.emplace_back(tuples[0][i], tuples[k][i]);
  }
  Substitution& s = res.sub;
  auto bind = [&](int v, const Term& t) {
    Substitution single;
    single.map.emplace(v, t);
    for (auto& [var, img] : s.map) img = single.apply(img);
    s.map[v] = t;
  };
  while (!eqs.empty()) {
    Term a = s.apply(eqs.front().first);
    Term b = s.apply(eqs.front().second);
    eqs.pop_front();
    if (a == b) continue;
    if (b.kind == Term::Kind::Var && a.kind != Term::Kind::Var) std::swap(a, b);
    if (a.kind == Term::Kind::Var) {
      if (occursIn(a.id, b)) {
        res.fail = UnifyFail::Occurs;
        return res;
      }
      bind(a.id, b);
      continue;
    }
    if (a.kind != b.kind || a.id != b.id || a.name != b.name || a.argSorts != b.argSorts) {
      res.fail = UnifyFail::Clash;
      return res;
    }
    for (size_t i = 0; i < a.args.size(); ++i) eqs.emplace_back(a.args[i], b.args[i]);
  }
  return res;
}

// ----------------------------------------------------------------- clauses

bool Clause::blatantlyInconsistent() const {
  for (const Literal& l : lits)
    if (l.set.any()) return false;
  return true;
}

Clause normalizeClause(Clause c) {
  std::sort(c.lits.begin(), c.lits.end(), [](const Literal& a, const Literal& b) {
    for (size_t i = 0; i < a.tuple.size(); ++i)
      if (int cm = termCompare(a.tuple[i], b.tuple[i])) return cm < 0;
    return a.set < b.set;
  });
  std::vector<Literal> out;
  for (Literal& l : c.lits) {
    if (!out.empty() && out.back().tuple == l.tuple)
      out.back().set |= l.set;
    else
      out.push_back(std::move(l));
  }
  c.lits = std::move(out);
  return c;
}

Clause applySub(const Substitution& s, const Clause& c) {
  Clause r;
  for (const Literal& l : c.lits) r.lits.push_back({l.set, s.apply(l.tuple)});
  return normalizeClause(r);
}

namespace {

Term shiftVars(const Term& t, int offset) {
  if (t.kind == Term::Kind::Var) return Term::var(t.id + offset, t.sort);
  if (t.kind != Term::Kind::App) return t;
  Term r = t;
  for (Term& a : r.args) a = shiftVars(a, offset);
  return r;
}

}  // namespace

Clause renameApart(const Clause& c, int offset) {
  Clause r = c;
  for (Literal& l : r.lits)
    for (Term& t : l.tuple) t = shiftVars(t, offset);
  return r;
}

int maxVarId(const Clause& c) {
  std::set<int> vars;
  for (const Literal& l : c.lits)
    for (const Term& t : l.tuple) collectVars(t, vars);
  return vars.empty() ? -1 : *vars.rbegin();
}

std::string showClause(const Clause& c) {
  std::string s = "{";
  for (size_t i = 0; i < c.lits.size(); ++i) {
    if (i) s += ", ";
    s += "{";
    bool first = true;
    c.lits[i].set.forEach([&](int w) {
      if (!first) s += ",";
      first = false;
      s += std::to_string(w);
    });
    s += "}" + showTuple(c.lits[i].tuple);
  }
  return s + "}";
}

namespace {

std::string serializeTerm(const Term& t, const std::map<int, int>* ren) {
  switch (t.kind) {
    case Term::Kind::Var:
      return "v" + std::to_string(ren ? ren->at(t.id) : t.id);
    case Term::Kind::EConst: return "e" + std::to_string(t.id);
    case Term::Kind::NConst: return "n" + t.name + ";";
    case Term::Kind::App: {
      std::string s = "g" + std::to_string(t.id) + "(";
      for (const Term& a : t.args) s += serializeTerm(a, ren) + ",";
      return s + ")";
    }
  }
  return "?";
}

std::string serializeLiteral(const Literal& l, const std::map<int, int>* ren) {
  std::string s = "[";
  l.set.forEach([&](int w) { s += std::to_string(w) + ","; });
  s += "](";
  for (const Term& t : l.tuple) s += serializeTerm(t, ren) + "|";
  return s + ")";
}

// Skeleton: literal with variable identities erased.
std::string skeleton(const Literal& l) {
  std::function<std::string(const Term&)> sk = [&](const Term& t) -> std::string {
    switch (t.kind) {
      case Term::Kind::Var: return "v";
      case Term::Kind::EConst: return "e" + std::to_string(t.id);
      case Term::Kind::NConst: return "n" + t.name + ";";
      case Term::Kind::App: {
        std::string s = "g" + std::to_string(t.id) + "(";
        for (const Term& a : t.args) s += sk(a) + ",";
        return s + ")";
      }
    }
    return "?";
  };
  std::string s = "[";
  l.set.forEach([&](int w) { s += std::to_string(w) + ","; });
  s += "](";
  for (const Term& t : l.tuple) s += sk(t) + "|";
  return s + ")";
}

void firstOccurrenceMap(const std::vector<const Literal*>& order, std::map<int, int>& ren) {
  ren.clear();
  std::function<void(const Term&)> walk = [&](const Term& t) {
    if (t.kind == Term::Kind::Var) {
      if (!ren.count(t.id)) {
        int next = int(ren.size());
        ren.emplace(t.id, next);
      }
      return;
    }
    for (const Term& a : t.args) walk(a);
  };
  for (const Literal* l : order)
    for (const Term& t : l->tuple) walk(t);
}

}  // namespace

std::string clauseKey(const Clause& c) {
  // Sort literals by skeleton; within tie groups try every permutation
  // (bounded) and keep the lexicographically least serialization.
  std::vector<const Literal*> lits;
  for (const Literal& l : c.lits) lits.push_back(&l);
  std::stable_sort(lits.begin(), lits.end(),
                   [](const Literal* a, const Literal* b) { return skeleton(*a) < skeleton(*b); });
  std::vector<std::pair<size_t, size_t>> groups;  // [begin, end) with equal skeletons
  for (size_t i = 0; i < lits.size();) {
    size_t j = i + 1;
    while (j < lits.size() && skeleton(*lits[j]) == skeleton(*lits[i])) ++j;
    if (j - i > 1) groups.emplace_back(i, j);
    i = j;
  }
  long long perms = 1;
  for (auto& [b, e] : groups) {
    for (size_t x = 2; x <= e - b; ++x) perms *= (long long)x;
    if (perms > 720) break;
  }
  auto serialize = [&](const std::vector<const Literal*>& order) {
    std::map<int, int> ren;
    firstOccurrenceMap(order, ren);
    std::string s;
    for (const Literal* l : order) s += serializeLiteral(*l, &ren) + ";";
    return s;
  };
  if (perms > 720 || groups.empty()) return serialize(lits);
  std::string best;
  std::function<void(size_t)> tryGroups = [&](size_t gi) {
    if (gi == groups.size()) {
      std::string s = serialize(lits);
      if (best.empty() || s < best) best = s;
      return;
    }
    auto [b, e] = groups[gi];
    std::sort(lits.begin() + b, lits.begin() + e);
    do {
      tryGroups(gi + 1);
    } while (std::next_permutation(lits.begin() + b, lits.begin() + e));
  };
  tryGroups(0);
  return best;
}

std::optional<Clause> resolveSR(const Clause& left, const std::vector<int>& leftSel,
                                const Clause& right, int rightSel, UnifyFail* whyNot,
                                Substitution* sigmaOut) {
  std::vector<TermTuple> tuples;
  for (int i : leftSel) tuples.push_back(left.lits[i].tuple);
  tuples.push_back(right.lits[rightSel].tuple);
  UnifyResult ur = unifyTuples(tuples);
  if (whyNot) *whyNot = ur.fail;
  if (ur.fail != UnifyFail::None) return std::nullopt;
  if (sigmaOut) *sigmaOut = ur.sub;
  Clause out;
  Bitset acc = left.lits[leftSel[0]].set;
  for (size_t i = 1; i < leftSel.size(); ++i) acc |= left.lits[leftSel[i]].set;
  acc &= right.lits[rightSel].set;
  for (int i = 0; i < int(left.lits.size()); ++i)
    if (std::find(leftSel.begin(), leftSel.end(), i) == leftSel.end())
      out.lits.push_back({left.lits[i].set, ur.sub.apply(left.lits[i].tuple)});
  out.lits.push_back({acc, ur.sub.apply(right.lits[rightSel].tuple)});
  for (int i = 0; i < int(right.lits.size()); ++i)
    if (i != rightSel)
      out.lits.push_back({right.lits[i].set, ur.sub.apply(right.lits[i].tuple)});
  return normalizeClause(out);
}

std::optional<Clause> resolveSRPlus(const Clause& left, const std::vector<int>& leftSel,
                                    const Clause& right, const std::vector<int>& rightSel,
                                    UnifyFail* whyNot, Substitution* sigmaOut) {
  std::vector<TermTuple> tuples;
  for (int i : leftSel) tuples.push_back(left.lits[i].tuple);
  for (int i : rightSel) tuples.push_back(right.lits[i].tuple);
  UnifyResult ur = unifyTuples(tuples);
  if (whyNot) *whyNot = ur.fail;
  if (ur.fail != UnifyFail::None) return std::nullopt;
  if (sigmaOut) *sigmaOut = ur.sub;
  Clause out;
  Bitset a = left.lits[leftSel[0]].set;
  for (size_t i = 1; i < leftSel.size(); ++i) a |= left.lits[leftSel[i]].set;
  Bitset b = right.lits[rightSel[0]].set;
  for (size_t i = 1; i < rightSel.size(); ++i) b |= right.lits[rightSel[i]].set;
  a &= b;
  for (int i = 0; i < int(left.lits.size()); ++i)
    if (std::find(leftSel.begin(), leftSel.end(), i) == leftSel.end())
      out.lits.push_back({left.lits[i].set, ur.sub.apply(left.lits[i].tuple)});
  out.lits.push_back({a, ur.sub.apply(right.lits[rightSel[0]].tuple)});
  for (int i = 0; i < int(right.lits.size()); ++i)
    if (std::find(rightSel.begin(), rightSel.end(), i) == rightSel.end())
      out.lits.push_back({right.lits[i].set, ur.sub.apply(right.lits[i].tuple)});
  return normalizeClause(out);
}

// -------------------------------------------------------------- saturation

std::string SaturateResult::dump() const {
  std::string s;
  for (const DerivStep& st : steps) {
    s += st.mode == ResMode::SR ? "(SR) " : st.mode == ResMode::LSR ? "(lSR) " : "(SR+) ";
    s += std::to_string(st.left) + "[";
    for (size_t i = 0; i < st.leftLits.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(st.leftLits[i]);
    }
    s += "] + " + std::to_string(st.right) + "[";
    for (size_t i = 0; i < st.rightLits.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(st.rightLits[i]);
    }
    s += "] => " + std::to_string(st.result) + " via " + st.sigma + "\n";
  }
  return s;
}

SaturateResult saturate(const std::vector<Clause>& phi, ResMode mode, int nAgents,
                        long long clauseCap) {
  (void)nAgents;
  SaturateResult res;
  std::set<std::string> keys;
  std::deque<int> queue;

  auto addClause = [&](Clause c, const DerivStep* proto) -> int {
    c = normalizeClause(std::move(c));
    std::string key = clauseKey(c);
    if (!keys.insert(key).second) return -1;
    if ((long long)res.clauses.size() >= clauseCap)
      throw BudgetExceeded("resolution derived-clause cap exceeded");
    int id = int(res.clauses.size());
    res.clauses.push_back(c);
    if (proto) {
      DerivStep st = *proto;
      st.result = id;
      res.steps.push_back(st);
    }
    if (res.blatantId < 0 && res.clauses[id].blatantlyInconsistent()) {
      res.blatantId = id;
      res.consistent = false;
    }
    queue.push_back(id);
    return id;
  };

  for (const Clause& c : phi) {
    addClause(c, nullptr);
    if (!res.consistent) return res;
  }

  // Occurring constants per sort, for the LSR instantiation slice.
  std::vector<Term> consts;
  {
    std::set<std::string> seen;
    std::function<void(const Term&)> scan = [&](const Term& t) {
      if (t.kind == Term::Kind::EConst || t.kind == Term::Kind::NConst) {
        std::string k = serializeTerm(t, nullptr) + "@" + std::to_string(t.sort);
        if (seen.insert(k).second) consts.push_back(t);
      }
      for (const Term& a : t.args) scan(a);
    };
    for (const Clause& c : phi)
      for (const Literal& l : c.lits)
        for (const Term& t : l.tuple) scan(t);
  }

  auto deriveFrom = [&](int L, int R) -> bool {  // false: blatant found
    Clause left = res.clauses[L];
    Clause right = renameApart(res.clauses[R], maxVarId(res.clauses[L]) + 1);
    int nl = int(left.lits.size());
    int nr = int(right.lits.size());
    if (nl == 0 || nr == 0 || nl > 20 || nr > 20) return true;
    auto handle = [&](std::optional<Clause> conc, const DerivStep& st) -> bool {
      if (!conc) return true;
      int id = addClause(std::move(*conc), &st);
      if (!res.consistent) return false;
      if (id >= 0 && mode == ResMode::LSR) {
        // Additionally instantiate one variable to an occurring
        // constant — a terminating slice of non-mgu unifier steps.
        Clause base = res.clauses[id];
        std::set<int> vars;
        std::map<int, int> sorts;
        for (const Literal& l : base.lits)
          for (const Term& t : l.tuple) {
            collectVars(t, vars);
            std::function<void(const Term&)> w = [&](const Term& u) {
              if (u.kind == Term::Kind::Var) sorts[u.id] = u.sort;
              for (const Term& a : u.args) w(a);
            };
            w(t);
          }
        for (int v : vars)
          for (const Term& cst : consts) {
            if (cst.sort != sorts[v]) continue;
            Substitution inst;
            inst.map.emplace(v, cst);
            DerivStep st2 = st;
            st2.sigma = st.sigma + "*" + inst.show();
            addClause(applySub(inst, base), &st2);
            if (!res.consistent) return false;
          }
      }
      return true;
    };
    for (int mask = 1; mask < (1 << nl); ++mask) {
      std::vector<int> sel;
      for (int i = 0; i < nl; ++i)
        if (mask & (1 << i)) sel.push_back(i);
      if (mode == ResMode::SRPlus) {
        for (int rmask = 1; rmask < (1 << nr); ++rmask) {
          std::vector<int> rsel;
          for (int i = 0; i < nr; ++i)
            if (rmask & (1 << i)) rsel.push_back(i);
          Substitution sg;
          auto conc = resolveSRPlus(left, sel, right, rsel, nullptr, &sg);
          DerivStep st{mode, L, sel, R, rsel, -1, sg.show()};
          if (!handle(std::move(conc), st)) return false;
        }
      } else {
        for (int r = 0; r < nr; ++r) {
          Substitution sg;
          auto conc = resolveSR(left, sel, right, r, nullptr, &sg);
          DerivStep st{mode, L, sel, R, {r}, -1, sg.show()};
          if (!handle(std::move(conc), st)) return false;
        }
      }
    }
    return true;
  };

  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j = 0; j <= i && j < int(res.clauses.size()); ++j) {
      if (!deriveFrom(i, j)) return res;
      if (i != j && !deriveFrom(j, i)) return res;
    }
  }
  return res;
}

// ----------------------------------------------- clause generation from Ξ

ClauseProblem clausesFromAtoms(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                               int nAgents) {
  ClauseProblem cp;
  int varCounter = 0;
  std::set<std::string> seedKeys;
  auto seed = [&](const TermTuple& t) {
    TermTuple can = canonicalTuple(t);
    std::string k = tupleKey(can);
    if (seedKeys.insert(k).second) cp.seedTuples.push_back(can);
  };
  for (const ModalAtom& a : xi) {
    std::vector<int> rest;
    for (int j = 0; j < nAgents; ++j) {
      bool inC = std::find(a.coalition.begin(), a.coalition.end(), j) != a.coalition.end();
      bool inO = std::find(a.commitment.agents.begin(), a.commitment.agents.end(), j) !=
                 a.commitment.agents.end();
      if (!inC && !inO) rest.push_back(j);
    }
    if (a.box) {
      std::map<int, int> varOf;
      for (int j : rest) varOf[j] = varCounter++;
      for (const JointNamed& p : a.commitment.moves) {
        TermTuple t(nAgents);
        for (AgentId j : a.coalition) t[j] = Term::eConst(cp.boxCount, j);
        for (auto& [ag, nm] : p.parts) t[ag] = Term::nConst(nm, ag);
        for (int j : rest) t[j] = Term::var(varOf[j], j);
        seed(t);
        cp.clauses.push_back(normalizeClause(Clause{{Literal{tau[a.var], t}}}));
      }
      ++cp.boxCount;
    } else {
      std::map<int, int> varOf;
      std::vector<Term> argTerms;
      for (AgentId j : a.coalition) {
        varOf[j] = varCounter++;
        argTerms.push_back(Term::var(varOf[j], j));
      }
      Clause cl;
      for (const JointNamed& r : a.commitment.moves) {
        TermTuple t(nAgents);
        for (AgentId j : a.coalition) t[j] = Term::var(varOf[j], j);
        for (int j : rest) t[j] = Term::app(cp.diamondCount, j, a.coalition, argTerms);
        for (auto& [ag, nm] : r.parts) t[ag] = Term::nConst(nm, ag);
        seed(t);
        cl.lits.push_back(Literal{tau[a.var], t});
      }
      cp.clauses.push_back(normalizeClause(std::move(cl)));
      ++cp.diamondCount;
    }
  }
  return cp;
}

// ------------------------------------------------------------ propositional

bool PropClause::blatantlyInconsistent() const {
  for (const PropLiteral& l : lits)
    if (l.set.any()) return false;
  return true;
}

PropClause normalizeProp(PropClause c) {
  std::sort(c.lits.begin(), c.lits.end(), [](const PropLiteral& a, const PropLiteral& b) {
    if (a.y != b.y) return a.y < b.y;
    return a.set < b.set;
  });
  std::vector<PropLiteral> out;
  for (PropLiteral& l : c.lits) {
    if (!out.empty() && out.back().y == l.y)
      out.back().set |= l.set;
    else
      out.push_back(std::move(l));
  }
  c.lits = std::move(out);
  return c;
}

std::string propKey(const PropClause& c) {
  std::string s;
  for (const PropLiteral& l : c.lits) {
    s += std::to_string(l.y) + ":";
    l.set.forEach([&](int w) { s += std::to_string(w) + ","; });
    s += ";";
  }
  return s;
}

PropResult propSaturate(const std::vector<PropClause>& phi, long long clauseCap) {
  PropResult res;
  std::set<std::string> keys;
  std::deque<int> queue;
  auto add = [&](PropClause c) {
    c = normalizeProp(std::move(c));
    std::string k = propKey(c);
    if (!keys.insert(k).second) return;
    if ((long long)res.clauses.size() >= clauseCap)
      throw BudgetExceeded("propositional resolution clause cap exceeded");
    int id = int(res.clauses.size());
    res.clauses.push_back(std::move(c));
    if (res.blatantId < 0 && res.clauses[id].blatantlyInconsistent()) {
      res.blatantId = id;
      res.consistent = false;
    }
    queue.push_back(id);
  };
  for (const PropClause& c : phi) {
    add(c);
    if (!res.consistent) return res;
  }
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j = 0; j <= i; ++j) {
      for (int oi = 0; oi < 2; ++oi) {
        int L = oi ? j : i;
        int R = oi ? i : j;
        const PropClause left = res.clauses[L];
        const PropClause right = res.clauses[R];
        for (size_t a = 0; a < left.lits.size(); ++a)
          for (size_t b = 0; b < right.lits.size(); ++b) {
            if (left.lits[a].y != right.lits[b].y) continue;
            PropClause out;
            for (size_t x = 0; x < left.lits.size(); ++x)
              if (x != a) out.lits.push_back(left.lits[x]);
            out.lits.push_back({left.lits[a].set & right.lits[b].set, left.lits[a].y});
            for (size_t x = 0; x < right.lits.size(); ++x)
              if (x != b) out.lits.push_back(right.lits[x]);
            add(std::move(out));
            if (!res.consistent) return res;
          }
        if (i == j) break;
      }
    }
  }
  return res;
}

std::vector<int> propExtractModel(const PropResult& saturated, int carrier, int ySize) {
  if (!saturated.consistent)
    throw Error("refusing model extraction from an inconsistent clause set");
  {
    PropResult again = propSaturate(saturated.clauses);
    if (again.clauses.size() != saturated.clauses.size())
      throw Error("refusing model extraction from a non-saturated clause set");
  }
  long long universe = 1;
  for (int y = 0; y < ySize; ++y) {
    universe *= (1LL << carrier) + 1;
    if (universe > 200000) throw Error("clause universe too large for extraction");
  }
  std::set<std::string> have;
  std::vector<PropClause> current = saturated.clauses;
  for (const PropClause& c : current) have.insert(propKey(c));

  // Enumerate the whole clause universe lexicographically: per y either
  // no literal or one literal with any carrier subset.
  std::vector<int> option(ySize, 0);  // 0 = absent, else subset index + 1
  std::vector<int> radix(ySize, (1 << carrier) + 1);
  do {
    PropClause cand;
    for (int y = 0; y < ySize; ++y) {
      if (option[y] == 0) continue;
      Bitset s(carrier);
      int bits = option[y] - 1;
      for (int w = 0; w < carrier; ++w)
        if (bits & (1 << w)) s.set(w);
      cand.lits.push_back({s, y});
    }
    if (cand.lits.empty()) continue;
    cand = normalizeProp(std::move(cand));
    if (have.count(propKey(cand))) continue;
    std::vector<PropClause> trial = current;
    trial.push_back(cand);
    if (propSaturate(trial).consistent) {
      current.push_back(cand);
      have.insert(propKey(cand));
    }
  } while (nextTuple(option, radix));

  std::vector<int> f(ySize, -1);
  for (const PropClause& c : current) {
    if (c.lits.size() != 1 || c.lits[0].set.count() != 1) continue;
    int y = c.lits[0].y;
    int w = c.lits[0].set.first();
    if (f[y] >= 0 && f[y] != w)
      throw InternalError("maximal consistent set names two moves for one index");
    f[y] = w;
  }
  for (int y = 0; y < ySize; ++y)
    if (f[y] < 0) throw InternalError("maximal consistent set names no move for an index");
  return f;
}

// ------------------------------------- unification closure & colored model

TermTuple canonicalTuple(const TermTuple& t) {
  std::map<int, int> ren;
  std::function<void(const Term&)> walk = [&](const Term& u) {
    if (u.kind == Term::Kind::Var) {
      if (!ren.count(u.id)) {
        int next = int(ren.size());
        ren.emplace(u.id, next);
      }
      return;
    }
    for (const Term& a : u.args) walk(a);
  };
  for (const Term& u : t) walk(u);
  std::function<Term(const Term&)> rw = [&](const Term& u) -> Term {
    if (u.kind == Term::Kind::Var) return Term::var(ren.at(u.id), u.sort);
    if (u.kind != Term::Kind::App) return u;
    Term r = u;
    for (Term& a : r.args) a = rw(a);
    return r;
  };
  TermTuple out = t;
  for (Term& u : out) u = rw(u);
  return out;
}

std::string tupleKey(const TermTuple& t) {
  TermTuple can = canonicalTuple(t);
  std::string s;
  for (const Term& u : can) s += serializeTerm(u, nullptr) + "|";
  return s;
}

std::vector<TermTuple> unificationClosure(const std::vector<TermTuple>& seed, long long cap) {
  std::vector<TermTuple> out;
  std::set<std::string> keys;
  std::deque<int> queue;
  auto add = [&](const TermTuple& t) {
    TermTuple can = canonicalTuple(t);
    std::string k = tupleKey(can);
    if (!keys.insert(k).second) return;
    if ((long long)out.size() >= cap) throw BudgetExceeded("unification closure exceeded cap");
    out.push_back(can);
    queue.push_back(int(out.size()) - 1);
  };
  for (const TermTuple& t : seed) add(t);
  auto maxVar = [](const TermTuple& t) {
    std::set<int> vars;
    for (const Term& u : t) collectVars(u, vars);
    return vars.empty() ? -1 : *vars.rbegin();
  };
  while (!queue.empty()) {
    int i = queue.front();
    queue.pop_front();
    for (int j = 0; j <= i; ++j) {
      TermTuple a = out[i];
      TermTuple b = out[j];
      int off = maxVar(a) + 1;
      for (Term& u : b) u = shiftVars(u, off);
      UnifyResult ur = unifyTuples({a, b});
      if (ur.fail != UnifyFail::None) continue;
      add(ur.sub.apply(a));
    }
  }
  return out;
}

int SymbolModel::nMove(const std::string& n) const {
  auto it = std::lower_bound(names.begin(), names.end(), n);
  if (it == names.end() || *it != n) throw InternalError("unknown named move in symbol model");
  return alpha + int(it - names.begin());
}

int SymbolModel::colorOf(int move) const {
  return (beta > 0 && move >= gBase()) ? (move - gBase()) % beta : 0;
}

int SymbolModel::gValue(int diaId, int sort, const std::vector<int>& argMoves) const {
  if (leastOther[diaId] < 0) throw InternalError("response function of a grand diamond");
  int color = 0;
  if (!zeroColors && sort == leastOther[diaId]) {
    int col = 0;
    for (int m : argMoves) col = (col + colorOf(m)) % beta;
    color = ((diaId - col) % beta + beta) % beta;
  }
  return gBase() + diaId * beta + color;
}

int SymbolModel::evalTerm(const Term& t, const std::map<int, int>& varVal) const {
  switch (t.kind) {
    case Term::Kind::Var: return varVal.at(t.id);
    case Term::Kind::EConst: return eMove(t.id);
    case Term::Kind::NConst: return nMove(t.name);
    case Term::Kind::App: {
      std::vector<int> argMoves;
      for (const Term& a : t.args) argMoves.push_back(evalTerm(a, varVal));
      return gValue(t.id, t.sort, argMoves);
    }
  }
  throw InternalError("unreachable term kind");
}

SymbolModel coloredUniverse(const std::vector<ModalAtom>& xi, int nAgents, bool zeroColors) {
  SymbolModel m;
  m.nAgents = nAgents;
  m.zeroColors = zeroColors;
  for (const ModalAtom& a : xi) {
    if (a.box) {
      ++m.alpha;
    } else {
      Bitset covered(nAgents);
      for (AgentId j : a.coalition) covered.set(j);
      for (AgentId j : a.commitment.agents) covered.set(j);
      int least = -1;
      for (int j = 0; j < nAgents; ++j)
        if (!covered.test(j)) {
          least = j;
          break;
        }
      m.leastOther.push_back(least);
      ++m.beta;
    }
    for (const JointNamed& jm : a.commitment.moves)
      for (auto& [ag, nm] : jm.parts) m.names.push_back(nm);
  }
  std::sort(m.names.begin(), m.names.end());
  m.names.erase(std::unique(m.names.begin(), m.names.end()), m.names.end());
  m.kPer = m.alpha + int(m.names.size()) + m.beta * m.beta;
  if (m.kPer == 0) m.kPer = 1;
  return m;
}

namespace {

struct PairSolver {
  const SymbolModel& m;
  TermTuple t, u;
  std::vector<int> vars;          // sorted var ids of both tuples
  std::map<int, int> varSort;
  long long* steps;
  long long cap;

  void scanVars(const Term& x) {
    if (x.kind == Term::Kind::Var) {
      varSort[x.id] = x.sort;
      return;
    }
    for (const Term& a : x.args) scanVars(a);
  }

  // Candidate moves per variable from coordinates where the other side
  // has a rigid head: constants pin the move, a response function pins
  // the symbol block (colors still free).
  std::map<int, std::vector<int>> candidates() {
    std::map<int, std::vector<int>> cand;
    auto all = [&]() {
      std::vector<int> v(m.kPer);
      std::iota(v.begin(), v.end(), 0);
      return v;
    };
    for (int v : vars) cand[v] = all();
    auto restrict = [&](int v, const std::vector<int>& allowed) {
      std::vector<int> merged;
      for (int x : cand[v])
        if (std::find(allowed.begin(), allowed.end(), x) != allowed.end()) merged.push_back(x);
      cand[v] = merged;
    };
    auto headMoves = [&](const Term& x) -> std::optional<std::vector<int>> {
      switch (x.kind) {
        case Term::Kind::EConst: return std::vector<int>{m.eMove(x.id)};
        case Term::Kind::NConst: return std::vector<int>{m.nMove(x.name)};
        case Term::Kind::App: {
          std::vector<int> v;
          for (int c = 0; c < m.beta; ++c) v.push_back(m.gBase() + x.id * m.beta + c);
          return v;
        }
        default: return std::nullopt;
      }
    };
    for (size_t i = 0; i < t.size(); ++i) {
      const Term &a = t[i], &b = u[i];
      if (a.kind == Term::Kind::Var)
        if (auto hm = headMoves(b)) restrict(a.id, *hm);
      if (b.kind == Term::Kind::Var)
        if (auto hm = headMoves(a)) restrict(b.id, *hm);
    }
    return cand;
  }

  // All solutions as valuation vectors aligned with `vars`.
  std::vector<std::vector<int>> solutions() {
    for (const Term& x : t) scanVars(x);
    for (const Term& x : u) scanVars(x);
    for (auto& [v, s] : varSort) vars.push_back(v);
    std::sort(vars.begin(), vars.end());
    auto cand = candidates();
    std::vector<std::vector<int>> sols;
    std::map<int, int> val;
    std::function<void(size_t)> rec = [&](size_t idx) {
      if (++*steps > cap) throw BudgetExceeded("equational completeness check exceeded budget");
      if (idx == vars.size()) {
        for (size_t i = 0; i < t.size(); ++i)
          if (m.evalTerm(t[i], val) != m.evalTerm(u[i], val)) return;
        std::vector<int> row;
        for (int v : vars) row.push_back(val.at(v));
        sols.push_back(std::move(row));
        return;
      }
      int v = vars[idx];
      for (int mv : cand[v]) {
        val[v] = mv;
        rec(idx + 1);
      }
      val.erase(v);
    };
    rec(0);
    return sols;
  }
};

}  // namespace

bool checkEquationallyComplete(const SymbolModel& m, const std::vector<TermTuple>& ct,
                               long long stepCap) {
  long long steps = 0;
  auto maxVar = [](const TermTuple& t) {
    std::set<int> vars;
    for (const Term& u : t) collectVars(u, vars);
    return vars.empty() ? -1 : *vars.rbegin();
  };
  for (size_t i = 0; i < ct.size(); ++i) {
    for (size_t j = i; j < ct.size(); ++j) {
      TermTuple t = ct[i];
      TermTuple u = ct[j];
      int off = maxVar(t) + 1;
      for (Term& x : u) x = shiftVars(x, off);
      PairSolver solver{m, t, u, {}, {}, &steps, stepCap};
      auto sols = solver.solutions();
      if (sols.empty()) continue;
      UnifyResult ur = unifyTuples({t, u});
      if (ur.fail != UnifyFail::None) return false;  // solvable but not unifiable
      // Valuations induced by instantiating the mgu image.
      std::set<int> imgVarsSet;
      for (int v : solver.vars) collectVars(ur.sub.apply(Term::var(v, solver.varSort[v])), imgVarsSet);
      std::vector<int> imgVars(imgVarsSet.begin(), imgVarsSet.end());
      std::set<std::vector<int>> induced;
      std::vector<int> radix(imgVars.size(), m.kPer);
      std::vector<int> tv(imgVars.size(), 0);
      do {
        if (++steps > stepCap)
          throw BudgetExceeded("equational completeness check exceeded budget");
        std::map<int, int> theta;
        for (size_t x = 0; x < imgVars.size(); ++x) theta[imgVars[x]] = tv[x];
        std::vector<int> row;
        for (int v : solver.vars)
          row.push_back(m.evalTerm(ur.sub.apply(Term::var(v, solver.varSort[v])), theta));
        induced.insert(std::move(row));
      } while (nextTuple(tv, radix));
      for (const auto& s : sols)
        if (!induced.count(s)) return false;  // solution outside the mgu instances
    }
  }
  return true;
}

}  // namespace amcdes
