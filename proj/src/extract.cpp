#include "amcdes/extract.hpp"

#include <algorithm>
#include <functional>
#include <map>

namespace amcdes {

std::optional<std::vector<int>> CellCsp::solve(long long stepCap) const {
  for (const Bitset& d : domains_)
    if (d.none()) return std::nullopt;
  std::vector<Bitset> dom = domains_;
  long long steps = 0;
  // A clause is settled once some literal is implied by the domain of
  // its cell; branching narrows one cell per level, so depth is bounded
  // by the clause count.
  std::function<bool()> rec = [&]() -> bool {
    if (++steps > stepCap) throw BudgetExceeded("cell constraint search exceeded budget");
    for (const Clause& c : clauses_) {
      bool settled = false;
      for (auto& [cell, allowed] : c.literals)
        if (dom[cell].any() && dom[cell].subsetOf(allowed)) {
          settled = true;
          break;
        }
      if (settled) continue;
      for (auto& [cell, allowed] : c.literals) {
        Bitset nd = dom[cell] & allowed;
        if (nd.none()) continue;
        Bitset saved = dom[cell];
        dom[cell] = nd;
        if (rec()) return true;
        dom[cell] = saved;
      }
      return false;
    }
    return true;
  };
  if (!rec()) return std::nullopt;
  std::vector<int> out;
  out.reserve(dom.size());
  for (const Bitset& d : dom) out.push_back(d.first());
  return out;
}

OneStepGame extractOneStepModel(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                                int carrier, int nAgents, long long stepCap, bool zeroColors) {
  std::vector<int> boxes, dias;
  for (size_t i = 0; i < xi.size(); ++i) (xi[i].box ? boxes : dias).push_back(int(i));
  int alpha = int(boxes.size());
  int beta = int(dias.size());

  std::vector<std::string> names;
  for (const ModalAtom& a : xi)
    for (const JointNamed& jm : a.commitment.moves)
      for (auto& [ag, name] : jm.parts) names.push_back(name);
  std::sort(names.begin(), names.end());
  names.erase(std::unique(names.begin(), names.end()), names.end());
  auto nameId = [&](const std::string& n) {
    return int(std::lower_bound(names.begin(), names.end(), n) - names.begin());
  };

  int kPer = alpha + int(names.size()) + beta * beta;
  if (kPer == 0) kPer = 1;  // no witnesses needed, but k ≥ 1 is required
  int gBase = alpha + int(names.size());
  auto gMove = [&](int jd, int color) { return gBase + jd * beta + color; };
  auto colorOf = [&](int move) { return move >= gBase ? (move - gBase) % beta : 0; };

  OneStepGame g;
  g.nAgents = nAgents;
  g.carrier = carrier;
  g.k.assign(nAgents, kPer);
  g.tau = tau;
  g.interp.resize(nAgents);
  for (int j = 0; j < nAgents; ++j)
    for (size_t i = 0; i < names.size(); ++i) g.interp[j][names[i]] = alpha + int(i);

  long long totalCells = 1;
  for (int j = 0; j < nAgents; ++j) {
    totalCells *= kPer;
    if (totalCells > 50000000)
      throw BudgetExceeded("one-step extraction move space exceeds budget");
  }

  CellCsp csp(carrier);
  std::map<int, int> cellOf;  // tuple index -> csp cell
  auto cell = [&](const std::vector<int>& full) {
    int t = tupleIndex(full, g.k);
    auto [it, fresh] = cellOf.emplace(t, csp.cellCount());
    if (fresh) csp.addCell();
    return it->second;
  };

  // One unit requirement per box, per committed move, per completion:
  // with every agent of D playing that box's witness and G playing the
  // committed move, the outcome must land in the box's tau-set.
  for (int jb = 0; jb < alpha; ++jb) {
    const ModalAtom& a = xi[boxes[jb]];
    std::vector<int> rest;
    for (int j = 0; j < nAgents; ++j) {
      bool inC = std::find(a.coalition.begin(), a.coalition.end(), j) != a.coalition.end();
      bool inO =
          std::find(a.commitment.agents.begin(), a.commitment.agents.end(), j) !=
          a.commitment.agents.end();
      if (!inC && !inO) rest.push_back(j);
    }
    for (const JointNamed& p : a.commitment.moves) {
      std::vector<int> full(nAgents, 0);
      for (AgentId j : a.coalition) full[j] = jb;
      for (auto& [ag, nm] : p.parts) full[ag] = alpha + nameId(nm);
      std::vector<int> radix(rest.size(), kPer);
      std::vector<int> t(rest.size(), 0);
      do {
        for (size_t i = 0; i < rest.size(); ++i) full[rest[i]] = t[i];
        csp.restrictCell(cell(full), tau[a.var]);
      } while (nextTuple(t, radix));
    }
  }

  // One clause per diamond, per joint move of its coalition: the
  // responding agents play that diamond's symbol, with the color that
  // completes the designated sum placed on the least responder; some
  // committed move must then reach the diamond's tau-set.
  for (int jd = 0; jd < beta; ++jd) {
    const ModalAtom& a = xi[dias[jd]];
    std::vector<int> other;
    for (int j = 0; j < nAgents; ++j) {
      bool inC = std::find(a.coalition.begin(), a.coalition.end(), j) != a.coalition.end();
      bool inH =
          std::find(a.commitment.agents.begin(), a.commitment.agents.end(), j) !=
          a.commitment.agents.end();
      if (!inC && !inH) other.push_back(j);
    }
    std::vector<int> radix(a.coalition.size(), kPer);
    std::vector<int> mc(a.coalition.size(), 0);
    do {
      std::vector<int> full(nAgents, 0);
      int col = 0;
      for (size_t i = 0; i < a.coalition.size(); ++i) {
        full[a.coalition[i]] = mc[i];
        col = (col + colorOf(mc[i])) % beta;
      }
      for (size_t i = 0; i < other.size(); ++i) {
        int color = 0;
        if (i == 0 && !zeroColors) color = ((jd - col) % beta + beta) % beta;
        full[other[i]] = gMove(jd, color);
      }
      CellCsp::Clause cl;
      for (const JointNamed& r : a.commitment.moves) {
        for (auto& [ag, nm] : r.parts) full[ag] = alpha + nameId(nm);
        cl.literals.emplace_back(cell(full), tau[a.var]);
      }
      csp.addClause(std::move(cl));
    } while (nextTuple(mc, radix));
  }

  auto solved = csp.solve(stepCap);
  if (!solved)
    throw InternalError(
        "one-step extraction: grounded constraints unsatisfiable although the tableau "
        "verdict was sat");
  g.f.assign(size_t(totalCells), 0);
  for (auto& [t, c] : cellOf) g.f[t] = (*solved)[c];

  for (const ModalAtom& a : xi)
    if (!liftingHolds(a, g))
      throw InternalError("one-step extraction: constructed game fails verification");
  return g;
}

}  // namespace amcdes
