#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include "amcdes/sat.hpp"

namespace amcdes {

namespace {

// Iterative Tarjan over explicit adjacency lists.
struct Scc {
  std::vector<int> comp;
  std::vector<char> cyclic;
  int comps = 0;

  explicit Scc(const std::vector<std::vector<int>>& adj) {
    int n = int(adj.size());
    comp.assign(n, -1);
    std::vector<int> low(n, 0), num(n, -1), stk;
    std::vector<char> onStk(n, 0);
    int counter = 0;
    struct Frame {
      int v;
      size_t edge;
    };
    std::vector<Frame> call;
    for (int s = 0; s < n; ++s) {
      if (num[s] >= 0) continue;
      call.push_back({s, 0});
      num[s] = low[s] = counter++;
      stk.push_back(s);
      onStk[s] = 1;
      while (!call.empty()) {
        Frame& fr = call.back();
        if (fr.edge < adj[fr.v].size()) {
          int w = adj[fr.v][fr.edge++];
          if (num[w] < 0) {
            num[w] = low[w] = counter++;
            stk.push_back(w);
            onStk[w] = 1;
            call.push_back({w, 0});
          } else if (onStk[w]) {
            low[fr.v] = std::min(low[fr.v], num[w]);
          }
        } else {
          int v = fr.v;
          call.pop_back();
          if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
          if (low[v] == num[v]) {
            while (true) {
              int w = stk.back();
              stk.pop_back();
              onStk[w] = 0;
              comp[w] = comps;
              if (w == v) break;
            }
            ++comps;
          }
        }
      }
    }
    cyclic.assign(comps, 0);
    for (int v = 0; v < n; ++v)
      for (int w : adj[v])
        if (comp[v] == comp[w]) cyclic[comp[v]] = 1;
  }
};

}  // namespace

// ---------------------------------------------------------------------------
// Branch letters and trace successors.
// ---------------------------------------------------------------------------

std::string BranchLetter::encode() const {
  std::string s(1, char('A' + int(kind)));
  s += std::to_string(target);
  if (kind == Kind::Modal) {
    s += '|';
    cont.forEach([&](int i) {
      s += std::to_string(i);
      s += ',';
    });
  }
  return s;
}

std::vector<int> traceSuccs(const Closure& cl, int s, const BranchLetter& letter) {
  using K = BranchLetter::Kind;
  switch (letter.kind) {
    case K::AndExp:
      if (s == letter.target) return cl.succ[s];
      return {s};
    case K::OrLeft:
      if (s == letter.target) return {cl.succ[s][0]};
      return {s};
    case K::OrRight:
      if (s == letter.target) return {cl.succ[s][1]};
      return {s};
    case K::Unfold:
      if (s == letter.target) return {cl.succ[s][0]};
      return {s};
    case K::Modal:
      if (cl.items[s].f->isModal() && letter.cont.test(cl.succ[s][0])) return {cl.succ[s][0]};
      return {};
  }
  return {};
}

// ---------------------------------------------------------------------------
// Generic automata.
// ---------------------------------------------------------------------------

int GenericNPA::maxPriority() const {
  int m = 0;
  for (int p : priority) m = std::max(m, p);
  return m;
}

bool GenericNPA::deterministic() const {
  if (initial.size() > 1) return false;
  for (const auto& row : delta)
    for (const auto& succs : row)
      if (succs.size() > 1) return false;
  return true;
}

bool GenericNPA::acceptsLasso(const std::vector<int>& stem, const std::vector<int>& period) const {
  if (period.empty()) throw Error("lasso acceptance needs a non-empty period");
  int len = int(stem.size() + period.size());
  auto letterAt = [&](int i) { return i < int(stem.size()) ? stem[i] : period[i - stem.size()]; };
  auto nextPos = [&](int i) { return i + 1 < len ? i + 1 : int(stem.size()); };
  int total = nStates * len;
  auto nodeId = [&](int q, int i) { return q * len + i; };

  std::vector<std::vector<int>> adj(total);
  for (int q = 0; q < nStates; ++q)
    for (int i = 0; i < len; ++i)
      for (int q2 : delta[q][letterAt(i)]) adj[nodeId(q, i)].push_back(nodeId(q2, nextPos(i)));

  std::vector<char> reach(total, 0);
  std::queue<int> bfs;
  for (int q0 : initial) {
    reach[nodeId(q0, 0)] = 1;
    bfs.push(nodeId(q0, 0));
  }
  while (!bfs.empty()) {
    int v = bfs.front();
    bfs.pop();
    for (int w : adj[v])
      if (!reach[w]) {
        reach[w] = 1;
        bfs.push(w);
      }
  }

  for (int p = 1; p <= maxPriority(); p += 2) {
    std::vector<std::vector<int>> sub(total);
    for (int q = 0; q < nStates; ++q) {
      if (priority[q] > p) continue;
      for (int i = 0; i < len; ++i)
        for (int w : adj[nodeId(q, i)])
          if (priority[w / len] <= p) sub[nodeId(q, i)].push_back(w);
    }
    Scc scc(sub);
    for (int q = 0; q < nStates; ++q) {
      if (priority[q] != p) continue;
      for (int i = 0; i < len; ++i) {
        int v = nodeId(q, i);
        if (reach[v] && scc.cyclic[scc.comp[v]]) return true;
      }
    }
  }
  return false;
}

int GenericDPA::maxPriority() const {
  int m = 0;
  for (const auto& row : pri)
    for (int p : row) m = std::max(m, p);
  return m;
}

bool GenericDPA::acceptsLasso(const std::vector<int>& stem, const std::vector<int>& period) const {
  if (period.empty()) throw Error("lasso acceptance needs a non-empty period");
  int st = initial;
  for (int a : stem) st = trans[st][a];
  std::map<int, int> passOf;
  std::vector<int> passMax;
  int cur = st;
  while (!passOf.count(cur)) {
    passOf.emplace(cur, int(passMax.size()));
    int m = 0;
    for (int a : period) {
      m = std::max(m, pri[cur][a]);
      cur = trans[cur][a];
    }
    passMax.push_back(m);
  }
  int m = 0;
  for (int i = passOf[cur]; i < int(passMax.size()); ++i) m = std::max(m, passMax[i]);
  return m % 2 == 1;
}

// ---------------------------------------------------------------------------
// Determinization machinery.
// ---------------------------------------------------------------------------

namespace {

// Breakpoint subset construction for automata whose bad runs are exactly the
// ones eventually confined to a fixed state set B. Transitions emit 1 while
// the owing set survives and 2 on each breakpoint, so the limit superior is
// odd iff the owing set eventually never empties, which happens iff some run
// stays in B forever from some point on.
class Breakpoint {
 public:
  Breakpoint(int nStates, Bitset b, int cap) : n_(nStates), b_(std::move(b)), cap_(cap) {}

  int init(const Bitset& s0) {
    Bitset o0 = s0 & b_;
    return intern(s0, o0);
  }

  std::pair<int, int> step(int det, const std::function<void(int, std::vector<int>&)>& succs) {
    Bitset s = states_[det].first, o = states_[det].second;
    Bitset s2(n_), o2(n_);
    std::vector<int> out;
    s.forEach([&](int q) {
      out.clear();
      succs(q, out);
      for (int q2 : out) s2.set(q2);
    });
    o.forEach([&](int q) {
      out.clear();
      succs(q, out);
      for (int q2 : out)
        if (b_.test(q2)) o2.set(q2);
    });
    int pri;
    if (o2.none()) {
      o2 = s2 & b_;
      pri = 2;
    } else {
      pri = 1;
    }
    return {intern(s2, o2), pri};
  }

  int size() const { return int(states_.size()); }

 private:
  int intern(const Bitset& s, const Bitset& o) {
    auto key = std::make_pair(s, o);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (int(states_.size()) >= cap_) throw BudgetExceeded("determinization state cap exceeded");
    states_.push_back(key);
    index_.emplace(key, int(states_.size()) - 1);
    return int(states_.size()) - 1;
  }

  int n_;
  Bitset b_;
  int cap_;
  std::vector<std::pair<Bitset, Bitset>> states_;
  std::map<std::pair<Bitset, Bitset>, int> index_;
};

// History-tree determinization of a Büchi automaton followed by an index
// appearance record. Each step reports per-name events: a name flashes green
// when its node absorbs its children (every tracked run revisited the
// accepting set) and red when its node disappears. The record keeps names
// ordered by how recently they went red; the transition priority derives from
// the foremost event position, mapped so that an accepting word yields an odd
// limit superior.
class HistoryIar {
 public:
  HistoryIar(int nStates, Bitset accepting, int cap)
      : n_(nStates), f_(std::move(accepting)), pool_(2 * nStates + 1), cap_(cap) {}

  int init(const Bitset& s0) {
    DState d;
    if (s0.any()) d.nodes.push_back({0, s0, {}});
    d.perm.resize(pool_);
    for (int i = 0; i < pool_; ++i) d.perm[i] = i;
    return intern(std::move(d));
  }

  std::pair<int, int> step(int det, const std::function<void(int, std::vector<int>&)>& succs) {
    DState d = states_[det];
    std::vector<char> red(pool_, 0), green(pool_, 0);

    if (!d.nodes.empty()) {
      std::vector<char> used(pool_, 0);
      for (const Node& nd : d.nodes) used[nd.name] = 1;
      auto alloc = [&]() {
        for (int i = 0; i < pool_; ++i)
          if (!used[i]) {
            used[i] = 1;
            return i;
          }
        throw InternalError("history tree name pool exhausted");
      };

      // Spawn a youngest child per node currently touching the accepting set.
      int orig = int(d.nodes.size());
      for (int v = 0; v < orig; ++v) {
        Bitset in = d.nodes[v].label & f_;
        if (in.any()) {
          int name = alloc();
          d.nodes.push_back({name, std::move(in), {}});
          d.nodes[v].kids.push_back(int(d.nodes.size()) - 1);
        }
      }

      // Subset transition on every label.
      std::vector<int> out;
      for (Node& nd : d.nodes) {
        Bitset nl(n_);
        nd.label.forEach([&](int q) {
          out.clear();
          succs(q, out);
          for (int q2 : out) nl.set(q2);
        });
        nd.label = std::move(nl);
      }

      // Horizontal merge: older siblings keep shared states; younger subtrees
      // lose them.
      std::function<void(int, const Bitset&)> subtractSubtree = [&](int v, const Bitset& s) {
        d.nodes[v].label = d.nodes[v].label.minus(s);
        for (int c : d.nodes[v].kids) subtractSubtree(c, s);
      };
      std::function<void(int)> horiz = [&](int v) {
        Bitset seen(n_);
        for (int c : d.nodes[v].kids) {
          if (seen.any()) subtractSubtree(c, seen);
          horiz(c);
          seen |= d.nodes[c].label;
        }
      };
      horiz(0);

      // Rebuild: drop empty nodes (red), then absorb children into any node
      // they exactly cover (green there, red below).
      DState nd;
      nd.perm = d.perm;
      std::function<void(int)> redSubtree = [&](int v) {
        red[d.nodes[v].name] = 1;
        for (int c : d.nodes[v].kids) redSubtree(c);
      };
      std::function<int(int)> build = [&](int v) -> int {
        if (d.nodes[v].label.none()) {
          redSubtree(v);
          return -1;
        }
        Bitset kidsUnion(n_);
        std::vector<int> live;
        for (int c : d.nodes[v].kids) {
          if (d.nodes[c].label.none()) {
            redSubtree(c);
          } else {
            kidsUnion |= d.nodes[c].label;
            live.push_back(c);
          }
        }
        int my = int(nd.nodes.size());
        nd.nodes.push_back({d.nodes[v].name, d.nodes[v].label, {}});
        if (!live.empty() && kidsUnion == d.nodes[v].label) {
          green[d.nodes[v].name] = 1;
          for (int c : live) redSubtree(c);
          return my;
        }
        std::vector<int> newKids;
        for (int c : live) {
          int nc = build(c);
          if (nc >= 0) newKids.push_back(nc);
        }
        nd.nodes[my].kids = std::move(newKids);
        return my;
      };
      build(0);
      d = std::move(nd);
    }

    // Record positions (1-based) of the foremost red and green names, then
    // push the red names to the back, oldest reds first.
    int e = -1, f = -1;
    for (int pos = 0; pos < pool_ && (e < 0 || f < 0); ++pos) {
      int nm = d.perm[pos];
      if (e < 0 && red[nm]) e = pos + 1;
      if (f < 0 && green[nm]) f = pos + 1;
    }
    int minEvent = 2 * pool_ + 1;
    if (e >= 0) minEvent = std::min(minEvent, 2 * e - 1);
    if (f >= 0) minEvent = std::min(minEvent, 2 * f);
    int outPri = (2 * pool_ + 1) - minEvent;

    std::vector<int> np;
    np.reserve(pool_);
    for (int nm : d.perm)
      if (!red[nm]) np.push_back(nm);
    for (int nm : d.perm)
      if (red[nm]) np.push_back(nm);
    d.perm = std::move(np);

    return {intern(std::move(d)), outPri};
  }

  int size() const { return int(states_.size()); }

 private:
  struct Node {
    int name;
    Bitset label;
    std::vector<int> kids;
  };
  struct DState {
    std::vector<Node> nodes;  // preorder; index 0 is the root when non-empty
    std::vector<int> perm;
  };

  std::string keyOf(const DState& d) const {
    std::string k;
    for (const Node& nd : d.nodes) {
      k += std::to_string(nd.name);
      k += ':';
      nd.label.forEach([&](int q) {
        k += std::to_string(q);
        k += ',';
      });
      k += '/';
      k += std::to_string(nd.kids.size());
      k += ';';
    }
    k += '#';
    for (int nm : d.perm) {
      k += std::to_string(nm);
      k += ',';
    }
    return k;
  }

  int intern(DState&& d) {
    std::string key = keyOf(d);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    if (int(states_.size()) >= cap_) throw BudgetExceeded("determinization state cap exceeded");
    states_.push_back(std::move(d));
    index_.emplace(std::move(key), int(states_.size()) - 1);
    return int(states_.size()) - 1;
  }

  int n_;
  Bitset f_;
  int pool_;
  int cap_;
  std::vector<DState> states_;
  std::map<std::string, int> index_;
};

// Committed-run copies turning a parity word automaton into a Büchi one: a
// run may switch from its base copy into a copy committed to an odd priority
// bound p, where it stays below p and is accepting whenever it touches p.
struct CommitCopies {
  int n = 0;
  std::vector<int> odds;          // distinct odd priorities present, ascending
  const std::vector<int>* pri = nullptr;

  int states() const { return n * (1 + int(odds.size())); }
  int item(int id) const { return id % n; }
  int copy(int id) const { return id / n; }
  bool accepting(int id) const {
    int c = copy(id);
    return c >= 1 && (*pri)[item(id)] == odds[c - 1];
  }
  Bitset acceptingSet() const {
    Bitset f(states());
    for (int id = 0; id < states(); ++id)
      if (accepting(id)) f.set(id);
    return f;
  }
  void expand(int id, const std::vector<int>& itemSuccs, std::vector<int>& out) const {
    int c = copy(id);
    if (c == 0) {
      for (int q2 : itemSuccs) {
        out.push_back(q2);
        for (int ci = 1; ci <= int(odds.size()); ++ci)
          if ((*pri)[q2] <= odds[ci - 1]) out.push_back(ci * n + q2);
      }
    } else {
      for (int q2 : itemSuccs)
        if ((*pri)[q2] <= odds[c - 1]) out.push_back(c * n + q2);
    }
  }
};

std::vector<int> distinctOdds(const std::vector<int>& pri) {
  std::vector<int> odds;
  for (int p : pri)
    if (p % 2 == 1) odds.push_back(p);
  std::sort(odds.begin(), odds.end());
  odds.erase(std::unique(odds.begin(), odds.end()), odds.end());
  return odds;
}

}  // namespace

GenericDPA determinize(const GenericNPA& a, const Budgets& budgets) {
  GenericDPA out;
  out.nLetters = a.nLetters;

  if (a.deterministic()) {
    int sink = a.nStates;
    out.nStates = a.nStates + 1;
    out.initial = a.initial.empty() ? sink : a.initial[0];
    out.trans.assign(out.nStates, std::vector<int>(a.nLetters, sink));
    out.pri.assign(out.nStates, std::vector<int>(a.nLetters, 0));
    for (int q = 0; q < a.nStates; ++q)
      for (int l = 0; l < a.nLetters; ++l)
        if (!a.delta[q][l].empty()) {
          int q2 = a.delta[q][l][0];
          out.trans[q][l] = q2;
          out.pri[q][l] = a.priority[q2];
        }
    return out;
  }

  std::vector<std::vector<int>> adj(a.nStates);
  for (int q = 0; q < a.nStates; ++q)
    for (int l = 0; l < a.nLetters; ++l)
      for (int q2 : a.delta[q][l]) adj[q].push_back(q2);
  Scc scc(adj);

  bool weak = true;
  std::vector<int> parityOf(scc.comps, -1);
  for (int q = 0; q < a.nStates && weak; ++q) {
    int c = scc.comp[q];
    if (!scc.cyclic[c]) continue;
    int par = a.priority[q] % 2;
    if (parityOf[c] < 0)
      parityOf[c] = par;
    else if (parityOf[c] != par)
      weak = false;
  }

  Bitset init(a.nStates);
  for (int q0 : a.initial) init.set(q0);

  if (weak) {
    Bitset b(a.nStates);
    for (int q = 0; q < a.nStates; ++q)
      if (scc.cyclic[scc.comp[q]] && a.priority[q] % 2 == 1) b.set(q);
    Breakpoint bp(a.nStates, b, budgets.detStates);
    int d0 = bp.init(init);
    out.initial = d0;
    std::queue<int> todo;
    todo.push(d0);
    std::vector<char> seen;
    auto noteSeen = [&](int d) {
      if (d >= int(seen.size())) seen.resize(d + 1, 0);
      if (seen[d]) return false;
      seen[d] = 1;
      return true;
    };
    noteSeen(d0);
    while (!todo.empty()) {
      int d = todo.front();
      todo.pop();
      if (d >= int(out.trans.size())) {
        out.trans.resize(d + 1, std::vector<int>(a.nLetters, 0));
        out.pri.resize(d + 1, std::vector<int>(a.nLetters, 0));
      }
      for (int l = 0; l < a.nLetters; ++l) {
        auto [nx, p] = bp.step(d, [&](int q, std::vector<int>& o) {
          for (int q2 : a.delta[q][l]) o.push_back(q2);
        });
        out.trans[d][l] = nx;
        out.pri[d][l] = p;
        if (noteSeen(nx)) todo.push(nx);
      }
    }
    out.nStates = bp.size();
    out.trans.resize(out.nStates, std::vector<int>(a.nLetters, 0));
    out.pri.resize(out.nStates, std::vector<int>(a.nLetters, 0));
    return out;
  }

  CommitCopies cc;
  cc.n = a.nStates;
  cc.odds = distinctOdds(a.priority);
  cc.pri = &a.priority;
  Bitset nbwInit(cc.states());
  init.forEach([&](int q) { nbwInit.set(q); });

  HistoryIar eng(cc.states(), cc.acceptingSet(), budgets.detStates);
  int d0 = eng.init(nbwInit);
  out.initial = d0;
  std::queue<int> todo;
  todo.push(d0);
  std::vector<char> seen{1};
  auto noteSeen = [&](int d) {
    if (d >= int(seen.size())) seen.resize(d + 1, 0);
    if (seen[d]) return false;
    seen[d] = 1;
    return true;
  };
  while (!todo.empty()) {
    int d = todo.front();
    todo.pop();
    if (d >= int(out.trans.size())) {
      out.trans.resize(d + 1, std::vector<int>(a.nLetters, 0));
      out.pri.resize(d + 1, std::vector<int>(a.nLetters, 0));
    }
    for (int l = 0; l < a.nLetters; ++l) {
      auto [nx, p] = eng.step(d, [&](int id, std::vector<int>& o) {
        cc.expand(id, a.delta[cc.item(id)][l], o);
      });
      out.trans[d][l] = nx;
      out.pri[d][l] = p;
      if (noteSeen(nx)) todo.push(nx);
    }
  }
  out.nStates = eng.size();
  out.trans.resize(out.nStates, std::vector<int>(a.nLetters, 0));
  out.pri.resize(out.nStates, std::vector<int>(a.nLetters, 0));
  return out;
}

// ---------------------------------------------------------------------------
// DetTracker.
// ---------------------------------------------------------------------------

struct DetTracker::Impl {
  const Closure& cl;
  Budgets budgets;
  int n;

  // Breakpoint mode.
  std::unique_ptr<Breakpoint> bp;

  // General mode.
  CommitCopies cc;
  std::vector<int> itemPriority;
  std::unique_ptr<HistoryIar> eng;

  std::map<std::pair<int, std::string>, std::pair<int, int>> memo;

  explicit Impl(const Closure& c, const Budgets& b) : cl(c), budgets(b), n(int(c.items.size())) {}
};

DetTracker::DetTracker(const Closure& cl, const Budgets& budgets) : impl_(new Impl(cl, budgets)) {
  if (cl.alternationFree) {
    mode_ = Mode::Breakpoint;
    Bitset bad(impl_->n);
    for (int i = 0; i < impl_->n; ++i)
      if (cl.items[i].badState) bad.set(i);
    impl_->bp = std::make_unique<Breakpoint>(impl_->n, bad, budgets.detStates);
  } else {
    mode_ = Mode::General;
    impl_->itemPriority.resize(impl_->n);
    for (int i = 0; i < impl_->n; ++i) impl_->itemPriority[i] = cl.items[i].priority;
    impl_->cc.n = impl_->n;
    impl_->cc.odds = distinctOdds(impl_->itemPriority);
    impl_->cc.pri = &impl_->itemPriority;
    impl_->eng = std::make_unique<HistoryIar>(impl_->cc.states(), impl_->cc.acceptingSet(),
                                              budgets.detStates);
  }
}

DetTracker::~DetTracker() { delete impl_; }

int DetTracker::initialState() {
  Bitset s0(impl_->n);
  s0.set(impl_->cl.root);
  if (mode_ == Mode::Breakpoint) return impl_->bp->init(s0);
  Bitset nbw(impl_->cc.states());
  s0.forEach([&](int q) { nbw.set(q); });
  return impl_->eng->init(nbw);
}

std::pair<int, int> DetTracker::step(int det, const BranchLetter& letter) {
  auto key = std::make_pair(det, letter.encode());
  auto it = impl_->memo.find(key);
  if (it != impl_->memo.end()) return it->second;
  std::pair<int, int> r;
  if (mode_ == Mode::Breakpoint) {
    r = impl_->bp->step(det, [&](int q, std::vector<int>& o) {
      for (int q2 : traceSuccs(impl_->cl, q, letter)) o.push_back(q2);
    });
  } else {
    r = impl_->eng->step(det, [&](int id, std::vector<int>& o) {
      impl_->cc.expand(id, traceSuccs(impl_->cl, impl_->cc.item(id), letter), o);
    });
  }
  impl_->memo.emplace(std::move(key), r);
  return r;
}

int DetTracker::numStates() const {
  return mode_ == Mode::Breakpoint ? impl_->bp->size() : impl_->eng->size();
}

}  // namespace amcdes
