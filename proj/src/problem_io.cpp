#include <algorithm>
#include <fstream>
#include <istream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "amcdes/problem_io.hpp"

namespace amcdes {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> splitList(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep)) {
    cur = trim(cur);
    if (!cur.empty()) out.push_back(cur);
  }
  return out;
}

bool allDigits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isdigit(c);
  });
}

}  // namespace

OneStepProblem loadOneStepProblem(std::istream& in) {
  std::vector<std::string> atomLines, tauLines;
  std::vector<std::string> declaredAgents;
  int carrier = -1;
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.rfind("agents:", 0) == 0) {
      std::string rest = trim(t.substr(7));
      if (allDigits(rest)) {
        // count form declares agents named "1".."n"
        int n = std::stoi(rest);
        if (n <= 0) throw Error("agents header must declare at least one agent");
        for (int i = 1; i <= n; ++i) declaredAgents.push_back(std::to_string(i));
      } else {
        declaredAgents = splitList(rest, ',');
        if (declaredAgents.empty()) throw Error("agents header declares no agents");
      }
      continue;
    }
    if (t.rfind("carrier:", 0) == 0) {
      std::string rest = trim(t.substr(8));
      if (!allDigits(rest)) throw Error("carrier header must be a non-negative integer");
      carrier = std::stoi(rest);
      continue;
    }
    if (t.rfind("tau", 0) == 0 && t.size() > 3 && (t[3] == ' ' || t[3] == '\t')) {
      tauLines.push_back(trim(t.substr(4)));
      continue;
    }
    atomLines.push_back(t);
  }
  if (carrier < 0) throw Error("one-step problem needs a carrier header");
  if (atomLines.empty()) throw Error("one-step problem declares no modal atoms");

  // Infer the signature across every atom line, then widen with the header.
  std::set<std::string> agents(declaredAgents.begin(), declaredAgents.end());
  std::map<std::string, std::set<std::string>> movesByAgent;
  for (const std::string& a : atomLines) {
    ParseResult pr = parse(a);
    for (int i = 0; i < pr.sig.nAgents(); ++i) {
      agents.insert(pr.sig.agents[i]);
      movesByAgent[pr.sig.agents[i]].insert(pr.sig.moves[i].begin(), pr.sig.moves[i].end());
    }
  }
  Signature sig;
  sig.agents.assign(agents.begin(), agents.end());
  std::sort(sig.agents.begin(), sig.agents.end(), agentNameLess);
  sig.moves.resize(sig.agents.size());
  for (int i = 0; i < sig.nAgents(); ++i) {
    auto it = movesByAgent.find(sig.agents[i]);
    if (it != movesByAgent.end()) sig.moves[i].assign(it->second.begin(), it->second.end());
  }

  OneStepProblem p;
  p.sig = sig;
  p.carrier = carrier;
  std::map<std::string, int> varId;
  for (const std::string& a : atomLines) {
    ParseResult pr = parse(a, sig);
    const FormulaPtr& f = pr.formula;
    if (!f->isModal() || f->left->kind != FKind::Atom)
      throw Error("atom line must be a modality applied to a variable: " + a);
    auto [it, fresh] = varId.emplace(f->left->name, int(p.varNames.size()));
    if (fresh) p.varNames.push_back(f->left->name);
    ModalAtom atom;
    atom.box = f->kind == FKind::Box;
    atom.coalition = f->coalition;
    atom.commitment = f->commitment;
    atom.var = it->second;
    p.atoms.push_back(std::move(atom));
  }

  p.tau.assign(p.varNames.size(), Bitset(carrier));
  std::vector<bool> seen(p.varNames.size(), false);
  for (const std::string& t : tauLines) {
    size_t eq = t.find('=');
    if (eq == std::string::npos) throw Error("tau line needs '=': tau " + t);
    std::string name = trim(t.substr(0, eq));
    std::string rhs = trim(t.substr(eq + 1));
    if (rhs.size() < 2 || rhs.front() != '{' || rhs.back() != '}')
      throw Error("tau set must be brace-enclosed: tau " + t);
    auto it = varId.find(name);
    if (it == varId.end()) throw Error("tau names an undeclared variable: " + name);
    if (seen[it->second]) throw Error("duplicate tau entry for variable: " + name);
    seen[it->second] = true;
    for (const std::string& e : splitList(rhs.substr(1, rhs.size() - 2), ',')) {
      if (!allDigits(e)) throw Error("tau elements must be carrier indices: " + e);
      int w = std::stoi(e);
      if (w >= carrier) throw Error("tau element " + e + " outside the carrier");
      p.tau[it->second].set(w);
    }
  }
  for (size_t v = 0; v < seen.size(); ++v)
    if (!seen[v]) throw Error("variable without a tau entry: " + p.varNames[v]);
  return p;
}

OneStepProblem loadOneStepProblemFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open one-step problem file: " + path);
  return loadOneStepProblem(in);
}

std::string showOneStepProblem(const OneStepProblem& p) {
  std::ostringstream out;
  out << "agents: ";
  for (int i = 0; i < p.sig.nAgents(); ++i) out << (i ? ", " : "") << p.sig.agents[i];
  out << "\ncarrier: " << p.carrier << "\n";
  for (const ModalAtom& a : p.atoms) {
    FormulaPtr f = a.box ? mkBox(a.coalition, a.commitment, mkAtom(p.varNames[a.var]),
                                 p.sig.nAgents())
                         : mkDiamond(a.coalition, a.commitment, mkAtom(p.varNames[a.var]),
                                     p.sig.nAgents());
    out << print(f, p.sig) << "\n";
  }
  for (size_t v = 0; v < p.varNames.size(); ++v) {
    out << "tau " << p.varNames[v] << " = {";
    bool first = true;
    p.tau[v].forEach([&](int w) {
      out << (first ? "" : ", ") << w;
      first = false;
    });
    out << "}\n";
  }
  return out.str();
}

}  // namespace amcdes
