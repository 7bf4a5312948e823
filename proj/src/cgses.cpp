#include "amcdes/cgses.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace amcdes {

using nlohmann::json;

std::vector<AgentId> JointMove::domain() const {
  std::vector<AgentId> d;
  d.reserve(parts.size());
  for (auto& [a, m] : parts) d.push_back(a);
  return d;
}

const int* JointMove::moveOf(AgentId j) const {
  for (auto& [a, m] : parts)
    if (a == j) return &m;
  return nullptr;
}

JointMove JointMove::restrictTo(const std::vector<AgentId>& d) const {
  JointMove r;
  for (auto& [a, m] : parts)
    if (std::find(d.begin(), d.end(), a) != d.end()) r.parts.emplace_back(a, m);
  return r;
}

bool extends(const JointMove& n, const JointMove& m) {
  for (auto& [a, mv] : n.parts) {
    const int* o = m.moveOf(a);
    if (!o || *o != mv) return false;
  }
  return true;
}

bool compatible(const JointMove& n, const JointMove& m) {
  for (auto& [a, mv] : n.parts) {
    const int* o = m.moveOf(a);
    if (o && *o != mv) return false;
  }
  return true;
}

std::optional<JointMove> mergeMoves(const JointMove& n, const JointMove& m) {
  if (!compatible(n, m)) return std::nullopt;
  JointMove r = n;
  for (auto& [a, mv] : m.parts)
    if (!r.moveOf(a)) r.parts.emplace_back(a, mv);
  std::sort(r.parts.begin(), r.parts.end());
  return r;
}

void Cgses::validate(bool requireInterpTotal) const {
  int n = nAgents();
  if (n == 0) throw Error("model declares no agents");
  if (states.empty()) throw Error("model declares no states");
  if (int(sig.moves.size()) != n) throw InternalError("signature move table size mismatch");
  for (int w = 0; w < nStates(); ++w) {
    const StateData& st = states[w];
    const std::string& name = stateNames[w];
    if (int(st.k.size()) != n) throw Error("k table does not cover all agents at " + name);
    for (int j = 0; j < n; ++j)
      if (st.k[j] < 1)
        throw Error("k must be at least 1 for agent " + sig.agents[j] + " at " + name);
    long long total = tupleCount(st.k);
    if (int(st.outcome.size()) != total) throw Error("outcome not total at " + name);
    for (int t : st.outcome)
      if (t < 0 || t >= nStates()) throw Error("outcome target out of range at " + name);
    if (int(st.interp.size()) != n)
      throw Error("interp table does not cover all agents at " + name);
    for (int j = 0; j < n; ++j) {
      for (auto& [mv, idx] : st.interp[j]) {
        if (sig.moveIndex(j, mv) < 0)
          throw Error("interp mentions undeclared moves for agent " + sig.agents[j] + " at " +
                      name);
        if (idx < 0 || idx >= st.k[j])
          throw Error("interp index out of range for move '" + mv + "' at " + name);
      }
      if (requireInterpTotal)
        for (const std::string& mv : sig.moves[j])
          if (!st.interp[j].count(mv))
            throw Error("interp missing move '" + mv + "' for agent " + sig.agents[j] + " at " +
                        name);
    }
  }
}

JointMove interpretJoint(const Cgses& s, int w, const JointNamed& m) {
  JointMove r;
  for (auto& [a, name] : m.parts) {
    auto it = s.states[w].interp[a].find(name);
    if (it == s.states[w].interp[a].end())
      throw Error("unknown move name '" + name + "' for agent " + s.sig.agents[a]);
    r.parts.emplace_back(a, it->second);
  }
  return r;
}

// ----------------------------------------------------------------- JSON I/O

Cgses loadCgses(std::istream& in, bool requireInterpTotal) {
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw Error(std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw Error("model file must hold a JSON object");
  for (auto& [key, val] : doc.items())
    if (key != "agents" && key != "explicit_moves" && key != "states" && key != "initial")
      throw Error("unknown top-level key '" + key + "'");
  if (!doc.contains("agents") || !doc["agents"].is_array())
    throw Error("missing or invalid 'agents' array");
  Cgses s;
  for (auto& a : doc["agents"]) {
    if (!a.is_string()) throw Error("agent names must be strings");
    s.sig.agents.push_back(a.get<std::string>());
  }
  int n = s.sig.nAgents();
  s.sig.moves.resize(n);
  if (doc.contains("explicit_moves")) {
    if (!doc["explicit_moves"].is_object()) throw Error("'explicit_moves' must be an object");
    for (auto& [agent, arr] : doc["explicit_moves"].items()) {
      int j = s.sig.agentIndex(agent);
      if (j < 0) throw Error("explicit_moves mentions unknown agent '" + agent + "'");
      if (!arr.is_array()) throw Error("explicit_moves entries must be arrays");
      for (auto& mv : arr) s.sig.moves[j].push_back(mv.get<std::string>());
      std::sort(s.sig.moves[j].begin(), s.sig.moves[j].end());
      s.sig.moves[j].erase(std::unique(s.sig.moves[j].begin(), s.sig.moves[j].end()),
                           s.sig.moves[j].end());
    }
  }
  if (!doc.contains("states") || !doc["states"].is_object())
    throw Error("missing or invalid 'states' object");
  for (auto& [name, st] : doc["states"].items()) {
    s.stateIndex.emplace(name, int(s.stateNames.size()));
    s.stateNames.push_back(name);
    (void)st;
  }
  for (auto& [name, st] : doc["states"].items()) {
    if (!st.is_object()) throw Error("state " + name + " must be an object");
    StateData d;
    d.k.assign(n, -1);
    d.interp.resize(n);
    if (st.contains("atoms"))
      for (auto& a : st["atoms"]) d.atoms.insert(a.get<std::string>());
    if (!st.contains("k") || !st["k"].is_object())
      throw Error("missing 'k' object at " + name);
    for (auto& [agent, kj] : st["k"].items()) {
      int j = s.sig.agentIndex(agent);
      if (j < 0) throw Error("k mentions unknown agent '" + agent + "' at " + name);
      if (!kj.is_number_integer()) throw Error("k entries must be integers at " + name);
      d.k[j] = kj.get<int>();
    }
    for (int j = 0; j < n; ++j)
      if (d.k[j] < 0) throw Error("k missing agent " + s.sig.agents[j] + " at " + name);
    for (int j = 0; j < n; ++j)
      if (d.k[j] < 1) throw Error("k must be at least 1 at " + name);
    if (!st.contains("outcome") || !st["outcome"].is_object())
      throw Error("missing 'outcome' object at " + name);
    long long total = tupleCount(d.k);
    d.outcome.assign(total, -1);
    for (auto& [key, target] : st["outcome"].items()) {
      std::vector<int> idx;
      std::stringstream ss(key);
      std::string part;
      while (std::getline(ss, part, ',')) {
        try {
          idx.push_back(std::stoi(part));
        } catch (...) {
          throw Error("bad outcome key '" + key + "' at " + name);
        }
      }
      if (int(idx.size()) != n) throw Error("outcome key '" + key + "' arity mismatch at " + name);
      for (int j = 0; j < n; ++j)
        if (idx[j] < 0 || idx[j] >= d.k[j])
          throw Error("outcome key '" + key + "' index out of range at " + name);
      if (!target.is_string()) throw Error("outcome targets must be state ids at " + name);
      auto it = s.stateIndex.find(target.get<std::string>());
      if (it == s.stateIndex.end())
        throw Error("outcome target '" + target.get<std::string>() + "' unknown at " + name);
      d.outcome[tupleIndex(idx, d.k)] = it->second;
    }
    for (int t : d.outcome)
      if (t < 0) throw Error("outcome not total at " + name);
    if (st.contains("interp")) {
      if (!st["interp"].is_object()) throw Error("'interp' must be an object at " + name);
      for (auto& [agent, tbl] : st["interp"].items()) {
        int j = s.sig.agentIndex(agent);
        if (j < 0) throw Error("interp mentions unknown agent '" + agent + "' at " + name);
        for (auto& [mv, val] : tbl.items()) {
          if (!val.is_number_integer()) throw Error("interp indices must be integers at " + name);
          d.interp[j][mv] = val.get<int>();
        }
      }
    }
    s.states.push_back(std::move(d));
  }
  s.validate(requireInterpTotal);
  return s;
}

Cgses loadCgsesFile(const std::string& path, bool requireInterpTotal) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open model file '" + path + "'");
  return loadCgses(in, requireInterpTotal);
}

std::string saveCgses(const Cgses& s, const std::string& initialState, bool pretty) {
  json doc;
  doc["agents"] = s.sig.agents;
  json em = json::object();
  for (int j = 0; j < s.nAgents(); ++j) em[s.sig.agents[j]] = s.sig.moves[j];
  doc["explicit_moves"] = em;
  json states = json::object();
  for (int w = 0; w < s.nStates(); ++w) {
    const StateData& d = s.states[w];
    json st;
    st["atoms"] = std::vector<std::string>(d.atoms.begin(), d.atoms.end());
    json k = json::object();
    for (int j = 0; j < s.nAgents(); ++j) k[s.sig.agents[j]] = d.k[j];
    st["k"] = k;
    json outcome = json::object();
    std::vector<int> t(s.nAgents(), 0);
    do {
      std::vector<std::string> parts;
      for (int v : t) parts.push_back(std::to_string(v));
      outcome[joinStrings(parts, ",")] = s.stateNames[d.outcome[tupleIndex(t, d.k)]];
    } while (nextTuple(t, d.k));
    st["outcome"] = outcome;
    json interp = json::object();
    for (int j = 0; j < s.nAgents(); ++j) {
      json tbl = json::object();
      for (auto& [mv, idx] : d.interp[j]) tbl[mv] = idx;
      interp[s.sig.agents[j]] = tbl;
    }
    st["interp"] = interp;
    states[s.stateNames[w]] = st;
  }
  doc["states"] = states;
  if (!initialState.empty()) doc["initial"] = initialState;
  return pretty ? doc.dump(2) + "\n" : doc.dump();
}

}  // namespace amcdes
