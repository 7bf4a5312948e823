// Command-line front end: parse, model-check, decide satisfiability, solve
// one-step problems, run resolution, and sweep a corpus directory. Every
// command prints one JSON report to stdout; exit codes are 0 for true/sat,
// 1 for false/unsat, 2 for errors, 3 for exceeded budgets.

#include <atomic>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "amcdes/budget.hpp"
#include "amcdes/extract.hpp"
#include "amcdes/mc.hpp"
#include "amcdes/problem_io.hpp"
#include "amcdes/resolution.hpp"
#include "amcdes/sat.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace amcdes;

namespace {

int exitFor(const std::string& verdict) {
  if (verdict == "true" || verdict == "sat") return 0;
  if (verdict == "false" || verdict == "unsat") return 1;
  if (verdict == "budget-exceeded") return 3;
  return 2;
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double ms() const {
    return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// Runs `body`, which fills the report and returns the verdict; converts
// exceptions into the error/budget-exceeded verdicts.
int guarded(bool pretty, const std::function<std::string(json&)>& body) {
  Timer t;
  json rpt = json::object();
  std::string verdict;
  try {
    verdict = body(rpt);
  } catch (const BudgetExceeded& e) {
    verdict = "budget-exceeded";
    rpt["message"] = e.what();
  } catch (const std::exception& e) {
    verdict = "error";
    rpt["message"] = e.what();
  }
  rpt["verdict"] = verdict;
  rpt["wallTimeMs"] = std::round(t.ms() * 1000.0) / 1000.0;
  std::cout << (pretty ? rpt.dump(2) : rpt.dump()) << "\n";
  return exitFor(verdict);
}

std::vector<std::string> splitCsv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else if (!std::isspace(static_cast<unsigned char>(c))) {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

json signatureJson(const Signature& sig) {
  json moves = json::object();
  for (int a = 0; a < sig.nAgents(); ++a) moves[sig.agents[a]] = sig.moves[a];
  return json{{"agents", sig.agents}, {"moves", moves}};
}

// ------------------------------------------------------------------ commands

std::string runParse(json& rpt, const std::string& text, const std::string& agentsCsv,
                     const Budgets& budgets) {
  ParseResult pr = parseWiden(text, splitCsv(agentsCsv));
  Closure cl = closure(pr.formula, pr.sig, budgets.closureSize);
  rpt["formula"] = print(pr.formula, pr.sig);
  rpt["signature"] = signatureJson(pr.sig);
  rpt["alternationFree"] = cl.alternationFree;
  rpt["statistics"] = json{{"closureSize", int(cl.items.size())}};
  return "true";
}

std::string runMc(json& rpt, const std::string& modelPath, const std::string& formulaText,
                  const std::string& stateName, const std::string& mode,
                  const std::string& engine, const Budgets& budgets) {
  Cgses m = loadCgsesFile(modelPath, /*requireInterpTotal=*/mode == "fixed");
  ParseResult pr = parse(formulaText, m.sig);
  auto it = m.stateIndex.find(stateName);
  if (it == m.stateIndex.end()) throw Error("unknown state '" + stateName + "'");
  int w = it->second;

  json stats{{"states", m.nStates()}};
  bool holds = false;
  if (mode == "open") {
    OpenResult r = openCheck(pr.formula, m, w, budgets.workSteps);
    holds = r.holds;
    if (holds) {
      json wit = json::object();
      for (int s = 0; s < m.nStates(); ++s) {
        json per = json::object();
        for (int a = 0; a < m.nAgents(); ++a)
          per[m.sig.agents[a]] = r.witness[s][a];
        wit[m.stateNames[s]] = std::move(per);
      }
      rpt["witnessInterpretation"] = std::move(wit);
    }
  } else if (engine == "game") {
    Bitset res = gameCheck(pr.formula, m);
    holds = res.test(w);
    stats["closureSize"] = int(closure(pr.formula, m.sig, 4096).items.size());
  } else {
    holds = eval(pr.formula, m).test(w);
  }
  rpt["statistics"] = std::move(stats);
  return holds ? "true" : "false";
}

std::string runSat(json& rpt, const std::string& text, const std::string& agentsCsv,
                   const std::string& emitPath, const Budgets& budgets) {
  ParseResult pr = parseWiden(text, splitCsv(agentsCsv));
  SatResult r = satisfiable(pr.formula, pr.sig, budgets);
  rpt["statistics"] = json{{"closureSize", r.closureSize},
                           {"gameNodes", r.gameNodes},
                           {"detStates", r.detStates}};
  rpt["trackerMode"] = r.trackerMode == DetTracker::Mode::Breakpoint ? "breakpoint" : "general";
  if (!r.sat) return "unsat";
  rpt["initialState"] = r.initialState;
  rpt["witnessStates"] = r.witness->nStates();
  if (!emitPath.empty()) {
    std::ofstream out(emitPath);
    if (!out) throw Error("cannot write '" + emitPath + "'");
    out << saveCgses(*r.witness, r.initialState, /*pretty=*/true);
    rpt["witnessPath"] = emitPath;
  }
  return "sat";
}

std::string runOnestep(json& rpt, const std::string& path, const Budgets& budgets) {
  OneStepProblem p = loadOneStepProblemFile(path);
  int nA = p.sig.nAgents();
  rpt["statistics"] = json{
      {"atoms", int(p.atoms.size())}, {"carrier", p.carrier}, {"agents", nA}};
  bool sat = oneStepTableauSat(p.atoms, p.tau, p.carrier, nA, budgets.ruleInstances);
  if (!sat) return "unsat";
  OneStepGame g = extractOneStepModel(p.atoms, p.tau, p.carrier, nA, budgets.workSteps);
  json game{{"k", g.k}};
  if (g.f.size() <= 4096) {
    game["f"] = g.f;
    json interp = json::object();
    for (int a = 0; a < nA; ++a) interp[p.sig.agents[a]] = g.interp[a];
    game["interp"] = std::move(interp);
  }
  rpt["witnessGame"] = std::move(game);
  return "sat";
}

std::string runResolve(json& rpt, const std::string& path, const std::string& rule,
                       const Budgets& budgets) {
  OneStepProblem p = loadOneStepProblemFile(path);
  ResMode mode = rule == "lsr" ? ResMode::LSR : rule == "sr+" ? ResMode::SRPlus : ResMode::SR;
  ClauseProblem cp = clausesFromAtoms(p.atoms, p.tau, p.sig.nAgents());
  SaturateResult sr = saturate(cp.clauses, mode, p.sig.nAgents(), budgets.derivedClauses);
  rpt["statistics"] = json{{"clausesInput", int(cp.clauses.size())},
                           {"clausesDerived", int(sr.clauses.size() - cp.clauses.size())},
                           {"resolutionSteps", int(sr.steps.size())}};
  if (sr.consistent) return "sat";
  rpt["derivation"] = sr.dump();
  return "unsat";
}

// ------------------------------------------------------------------- corpus

struct CorpusEntry {
  enum class Kind { Sat, Mc } kind = Kind::Sat;
  std::string file;
  int line = 0;
  // sat entries
  std::string expect;  // "sat" | "unsat" | "?"
  std::string formula;
  std::vector<std::string> agents;
  // mc entries
  std::string modelPath;
  std::string state;
  std::string mode = "fixed";
  bool expectHolds = true;
};

void parseCorpusLines(const fs::path& file, std::vector<CorpusEntry>& out) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read '" + file.string() + "'");
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> cols;
    size_t pos = 0;
    while (true) {
      size_t tab = line.find('\t', pos);
      cols.push_back(line.substr(pos, tab == std::string::npos ? tab : tab - pos));
      if (tab == std::string::npos) break;
      pos = tab + 1;
    }
    if (cols.size() < 2) throw Error(file.string() + ":" + std::to_string(no) +
                                     ": expected '<expect>\\t<formula>[\\t<agents>]'");
    CorpusEntry e;
    e.kind = CorpusEntry::Kind::Sat;
    e.file = file.string();
    e.line = no;
    e.expect = cols[0];
    if (e.expect != "sat" && e.expect != "unsat" && e.expect != "?")
      throw Error(file.string() + ":" + std::to_string(no) + ": expect must be sat|unsat|?");
    e.formula = cols[1];
    if (cols.size() > 2) e.agents = splitCsv(cols[2]);
    out.push_back(std::move(e));
  }
}

void parseMcq(const fs::path& file, const fs::path& root, std::vector<CorpusEntry>& out) {
  std::ifstream in(file);
  if (!in) throw Error("cannot read '" + file.string() + "'");
  json q = json::parse(in);
  CorpusEntry e;
  e.kind = CorpusEntry::Kind::Mc;
  e.file = file.string();
  e.formula = q.at("formula").get<std::string>();
  e.state = q.at("state").get<std::string>();
  if (q.contains("mode")) e.mode = q["mode"].get<std::string>();
  e.expectHolds = q.at("expect").get<bool>();
  fs::path mp = q.at("model").get<std::string>();
  if (mp.is_relative()) {
    fs::path local = file.parent_path() / mp;
    mp = fs::exists(local) ? local : root / mp;
  }
  e.modelPath = mp.string();
  out.push_back(std::move(e));
}

struct EntryResult {
  bool ok = false;
  std::string verdict;
  std::string message;
};

EntryResult runEntry(const CorpusEntry& e, const Budgets& budgets) {
  EntryResult r;
  try {
    if (e.kind == CorpusEntry::Kind::Sat) {
      ParseResult pr = parseWiden(e.formula, e.agents);
      SatResult s = satisfiable(pr.formula, pr.sig, budgets);
      r.verdict = s.sat ? "sat" : "unsat";
      r.ok = e.expect == "?" || e.expect == r.verdict;
      if (!r.ok) r.message = "expected " + e.expect;
    } else {
      Cgses m = loadCgsesFile(e.modelPath, /*requireInterpTotal=*/e.mode == "fixed");
      ParseResult pr = parse(e.formula, m.sig);
      auto it = m.stateIndex.find(e.state);
      if (it == m.stateIndex.end()) throw Error("unknown state '" + e.state + "'");
      bool holds;
      if (e.mode == "open") {
        holds = openCheck(pr.formula, m, it->second, budgets.workSteps).holds;
      } else {
        bool naive = eval(pr.formula, m).test(it->second);
        bool game = gameCheck(pr.formula, m).test(it->second);
        if (naive != game) {
          r.verdict = "error";
          r.message = "engine disagreement: naive=" + std::to_string(naive) +
                      " game=" + std::to_string(game);
          return r;
        }
        holds = naive;
      }
      r.verdict = holds ? "true" : "false";
      r.ok = holds == e.expectHolds;
      if (!r.ok) r.message = std::string("expected ") + (e.expectHolds ? "true" : "false");
    }
  } catch (const BudgetExceeded& ex) {
    r.verdict = "budget-exceeded";
    r.message = ex.what();
    r.ok = e.kind == CorpusEntry::Kind::Sat && e.expect == "?";
  } catch (const std::exception& ex) {
    r.verdict = "error";
    r.message = ex.what();
    r.ok = false;
  }
  return r;
}

std::string runCorpus(json& rpt, const std::string& dir, int jobs, const Budgets& budgets) {
  fs::path root(dir);
  if (!fs::is_directory(root)) throw Error("'" + dir + "' is not a directory");

  std::vector<fs::path> files;
  for (const auto& de : fs::recursive_directory_iterator(root))
    if (de.is_regular_file()) files.push_back(de.path());
  std::sort(files.begin(), files.end());

  std::vector<CorpusEntry> entries;
  for (const fs::path& f : files) {
    std::string ext = f.extension().string();
    if (ext == ".txt" || ext == ".sat") parseCorpusLines(f, entries);
    else if (ext == ".mcq") parseMcq(f, root, entries);
  }
  if (entries.empty()) throw Error("no corpus entries under '" + dir + "'");

  std::vector<EntryResult> results(entries.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next.fetch_add(1); i < entries.size(); i = next.fetch_add(1))
      results[i] = runEntry(entries[i], budgets);
  };
  int n = std::max(1, jobs);
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();

  int sat = 0, unsat = 0, mcq = 0, mismatches = 0, budget = 0;
  json failures = json::array();
  for (size_t i = 0; i < entries.size(); ++i) {
    const CorpusEntry& e = entries[i];
    const EntryResult& r = results[i];
    if (e.kind == CorpusEntry::Kind::Mc) ++mcq;
    else if (r.verdict == "sat") ++sat;
    else if (r.verdict == "unsat") ++unsat;
    if (r.verdict == "budget-exceeded") ++budget;
    if (!r.ok) {
      ++mismatches;
      if (failures.size() < 20)
        failures.push_back(json{{"file", e.file},
                                {"line", e.line},
                                {"entry", e.formula},
                                {"verdict", r.verdict},
                                {"message", r.message}});
    }
  }
  rpt["statistics"] = json{{"entries", int(entries.size())},
                           {"satVerdicts", sat},
                           {"unsatVerdicts", unsat},
                           {"mcQueries", mcq},
                           {"budgetExceeded", budget},
                           {"mismatches", mismatches}};
  if (mismatches > 0) rpt["failures"] = std::move(failures);
  return mismatches == 0 ? "true" : "false";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"AMCDES toolkit: model checking and satisfiability for the alternating-time "
               "mu-calculus with disjunctive explicit strategies"};
  app.require_subcommand(1);
  bool pretty = false;
  app.add_flag("--pretty", pretty, "indent the JSON report");

  std::string formula, agentsCsv, emitPath, modelPath, stateName, problemPath, corpusDir;
  std::string mode = "fixed", engine = "naive", rule = "sr";
  int jobs = int(std::max(1u, std::min(8u, std::thread::hardware_concurrency())));

  // lets the global --pretty appear after the subcommand name too
  app.fallthrough();

  CLI::App* cmdParse = app.add_subcommand("parse", "parse a formula and report its signature");
  cmdParse->fallthrough();
  cmdParse->add_option("formula", formula, "formula text")->required();
  cmdParse->add_option("--agents", agentsCsv, "extra agent names (comma-separated) widening the universe");

  CLI::App* cmdMc = app.add_subcommand("mc", "model-check a formula on a CGSES state");
  cmdMc->fallthrough();
  cmdMc->add_option("--model", modelPath, "model file (JSON)")->required();
  cmdMc->add_option("--formula", formula, "formula text")->required();
  cmdMc->add_option("--state", stateName, "state name")->required();
  cmdMc->add_option("--mode", mode, "fixed|open (default fixed)")
      ->check(CLI::IsMember({"fixed", "open"}));
  cmdMc->add_option("--engine", engine, "naive|game (default naive; fixed mode only)")
      ->check(CLI::IsMember({"naive", "game"}));

  CLI::App* cmdSat = app.add_subcommand("sat", "decide satisfiability; verify any witness");
  cmdSat->fallthrough();
  cmdSat->add_option("formula", formula, "formula text")->required();
  cmdSat->add_option("--emit-model", emitPath, "write the witness model to this file");
  cmdSat->add_option("--agents", agentsCsv, "extra agent names (comma-separated) widening the universe");

  CLI::App* cmdOne = app.add_subcommand("onestep", "decide a one-step problem file");
  cmdOne->fallthrough();
  cmdOne->add_option("file", problemPath, "one-step problem file")->required();

  CLI::App* cmdRes = app.add_subcommand("resolve", "saturate the clause translation of a one-step problem");
  cmdRes->fallthrough();
  cmdRes->add_option("file", problemPath, "one-step problem file")->required();
  cmdRes->add_option("--rule", rule, "sr|lsr|sr+ (default sr)")
      ->check(CLI::IsMember({"sr", "lsr", "sr+"}));

  CLI::App* cmdCorpus = app.add_subcommand("corpus", "run every corpus entry under a directory");
  cmdCorpus->fallthrough();
  cmdCorpus->add_option("dir", corpusDir, "directory with *.txt/*.sat corpora and *.mcq queries")
      ->required();
  cmdCorpus->add_option("--jobs", jobs, "worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  Budgets budgets;
  try {
    budgets = Budgets::fromEnv();
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 2;
  }

  if (cmdParse->parsed())
    return guarded(pretty, [&](json& r) { return runParse(r, formula, agentsCsv, budgets); });
  if (cmdMc->parsed())
    return guarded(pretty, [&](json& r) {
      return runMc(r, modelPath, formula, stateName, mode, engine, budgets);
    });
  if (cmdSat->parsed())
    return guarded(pretty,
                   [&](json& r) { return runSat(r, formula, agentsCsv, emitPath, budgets); });
  if (cmdOne->parsed())
    return guarded(pretty, [&](json& r) { return runOnestep(r, problemPath, budgets); });
  if (cmdRes->parsed())
    return guarded(pretty, [&](json& r) { return runResolve(r, problemPath, rule, budgets); });
  if (cmdCorpus->parsed())
    return guarded(pretty, [&](json& r) { return runCorpus(r, corpusDir, jobs, budgets); });
  std::cerr << "no subcommand\n";
  return 2;
}
