#include "amcdes/formula.hpp"

#include <algorithm>
#include <cctype>

namespace amcdes {

int Signature::agentIndex(const std::string& name) const {
  for (int i = 0; i < int(agents.size()); ++i)
    if (agents[i] == name) return i;
  return -1;
}

int Signature::moveIndex(AgentId j, const std::string& name) const {
  const auto& v = moves[j];
  for (int i = 0; i < int(v.size()); ++i)
    if (v[i] == name) return i;
  return -1;
}

std::vector<AgentId> JointNamed::domain() const {
  std::vector<AgentId> d;
  d.reserve(parts.size());
  for (auto& [a, m] : parts) d.push_back(a);
  return d;
}

const std::string* JointNamed::moveOf(AgentId j) const {
  for (auto& [a, m] : parts)
    if (a == j) return &m;
  return nullptr;
}

bool compatibleNamed(const JointNamed& n, const JointNamed& m) {
  for (auto& [a, mv] : n.parts) {
    const std::string* o = m.moveOf(a);
    if (o && *o != mv) return false;
  }
  return true;
}

std::optional<JointNamed> mergeNamed(const JointNamed& n, const JointNamed& m) {
  if (!compatibleNamed(n, m)) return std::nullopt;
  JointNamed r = n;
  for (auto& [a, mv] : m.parts)
    if (!r.moveOf(a)) r.parts.emplace_back(a, mv);
  std::sort(r.parts.begin(), r.parts.end());
  return r;
}

// ------------------------------------------------------------- constructors

static FormulaPtr mk(FKind k) {
  auto f = std::make_shared<Formula>();
  f->kind = k;
  return f;
}

FormulaPtr mkTop() { return mk(FKind::Top); }
FormulaPtr mkBot() { return mk(FKind::Bot); }

FormulaPtr mkAtom(const std::string& p) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Atom;
  f->name = p;
  return f;
}

FormulaPtr mkNegAtom(const std::string& p) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::NegAtom;
  f->name = p;
  return f;
}

FormulaPtr mkVar(const std::string& x) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Var;
  f->name = x;
  return f;
}

FormulaPtr mkAnd(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::And;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

FormulaPtr mkOr(FormulaPtr a, FormulaPtr b) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Or;
  f->left = std::move(a);
  f->right = std::move(b);
  return f;
}

static void validateModality(const std::vector<AgentId>& c, const Commitment& o, int nAgents) {
  for (AgentId a : c)
    if (a < 0 || a >= nAgents) throw Error("coalition agent index out of range");
  for (AgentId a : o.agents)
    if (a < 0 || a >= nAgents) throw Error("commitment agent index out of range");
  for (AgentId a : c)
    if (std::find(o.agents.begin(), o.agents.end(), a) != o.agents.end())
      throw Error("coalition and committed agents must be disjoint");
  if (o.moves.empty()) throw Error("commitment must contain at least one joint move");
  for (const JointNamed& jm : o.moves)
    if (jm.domain() != o.agents)
      throw Error("every joint move of a commitment must cover exactly its agents");
  if (int(c.size() + o.agents.size()) == nAgents && o.moves.size() > 1)
    throw Error("grand-coalition modalities must not be disjunctive");
}

static FormulaPtr mkModal(FKind k, std::vector<AgentId> c, Commitment o, FormulaPtr body,
                          int nAgents) {
  std::sort(c.begin(), c.end());
  c.erase(std::unique(c.begin(), c.end()), c.end());
  std::sort(o.agents.begin(), o.agents.end());
  std::sort(o.moves.begin(), o.moves.end());
  o.moves.erase(std::unique(o.moves.begin(), o.moves.end()), o.moves.end());
  validateModality(c, o, nAgents);
  auto f = std::make_shared<Formula>();
  f->kind = k;
  f->coalition = std::move(c);
  f->commitment = std::move(o);
  f->left = std::move(body);
  return f;
}

FormulaPtr mkBox(std::vector<AgentId> c, Commitment o, FormulaPtr body, int nAgents) {
  return mkModal(FKind::Box, std::move(c), std::move(o), std::move(body), nAgents);
}

FormulaPtr mkDiamond(std::vector<AgentId> c, Commitment o, FormulaPtr body, int nAgents) {
  return mkModal(FKind::Diamond, std::move(c), std::move(o), std::move(body), nAgents);
}

FormulaPtr mkMu(const std::string& x, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Mu;
  f->name = x;
  f->left = std::move(body);
  return f;
}

FormulaPtr mkNu(const std::string& x, FormulaPtr body) {
  auto f = std::make_shared<Formula>();
  f->kind = FKind::Nu;
  f->name = x;
  f->left = std::move(body);
  return f;
}

// ------------------------------------------------------------------ printing

static std::string printCommitmentSuffix(const Commitment& o, const Signature& sig) {
  if (o.isEmpty()) return "";
  std::vector<std::string> joints;
  for (const JointNamed& jm : o.moves) {
    std::vector<std::string> assigns;
    for (auto& [a, m] : jm.parts) assigns.push_back(sig.agents[a] + ":" + m);
    joints.push_back(joinStrings(assigns, ","));
  }
  return ", (" + joinStrings(joints, "|") + ")";
}

std::string print(const FormulaPtr& f, const Signature& sig) {
  switch (f->kind) {
    case FKind::Top: return "true";
    case FKind::Bot: return "false";
    case FKind::Atom: return f->name;
    case FKind::NegAtom: return "!" + f->name;
    case FKind::Var: return f->name;
    case FKind::And:
      return "(" + print(f->left, sig) + " & " + print(f->right, sig) + ")";
    case FKind::Or:
      return "(" + print(f->left, sig) + " | " + print(f->right, sig) + ")";
    case FKind::Box:
    case FKind::Diamond: {
      std::vector<std::string> names;
      for (AgentId a : f->coalition) names.push_back(sig.agents[a]);
      std::string inner = "{" + joinStrings(names, ",") + "}" +
                          printCommitmentSuffix(f->commitment, sig);
      std::string open = f->kind == FKind::Box ? "[" : "<";
      std::string close = f->kind == FKind::Box ? "]" : ">";
      return open + inner + close + " " + print(f->left, sig);
    }
    case FKind::Mu:
      return "(mu " + f->name + ". " + print(f->left, sig) + ")";
    case FKind::Nu:
      return "(nu " + f->name + ". " + print(f->left, sig) + ")";
  }
  throw InternalError("unreachable formula kind");
}

// ----------------------------------------------------------------- raw parse

namespace {

struct Token {
  enum Kind { Name, Sym, End } kind;
  std::string text;
  int pos;
};

struct Lexer {
  const std::string& s;
  size_t i = 0;
  explicit Lexer(const std::string& str) : s(str) {}

  Token next() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    if (i >= s.size()) return {Token::End, "", int(i)};
    char c = s[i];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
        std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      Token t{Token::Name, s.substr(i, j - i), int(i)};
      i = j;
      return t;
    }
    static const std::string syms = "&|!()[]<>{},:.";
    if (syms.find(c) != std::string::npos) {
      Token t{Token::Sym, std::string(1, c), int(i)};
      ++i;
      return t;
    }
    throw Error("syntax error at position " + std::to_string(i) + ": unexpected character '" +
                std::string(1, c) + "'");
  }
};

// Unvalidated parse tree; coalitions and commitments still name-based.
struct Raw {
  FKind kind;
  std::string name;
  std::shared_ptr<Raw> left, right;
  std::vector<std::string> coalition;
  std::vector<std::vector<std::pair<std::string, std::string>>> commits;  // joint moves
  bool hasCommit = false;
  int pos = 0;
};
using RawPtr = std::shared_ptr<Raw>;

RawPtr rawNode(FKind k) {
  auto r = std::make_shared<Raw>();
  r->kind = k;
  return r;
}

// NNF complement on the raw tree. `local` holds binders introduced inside
// the negated subterm: ¬µx.φ becomes νx.¬φ[x ↦ ¬x], so occurrences of x
// bound within the negation stay positive. Variables bound outside are
// caught later, at resolution time.
RawPtr rawNegate(const RawPtr& r, std::vector<std::string>& local) {
  auto flip = [&](FKind k) {
    auto n = std::make_shared<Raw>(*r);
    n->kind = k;
    return n;
  };
  auto isLocal = [&](const std::string& x) {
    return std::find(local.begin(), local.end(), x) != local.end();
  };
  switch (r->kind) {
    case FKind::Top: return rawNode(FKind::Bot);
    case FKind::Bot: return rawNode(FKind::Top);
    case FKind::Atom:
      return isLocal(r->name) ? r : flip(FKind::NegAtom);
    case FKind::NegAtom:
      return isLocal(r->name) ? r : flip(FKind::Atom);
    case FKind::Var:
      return r;
    case FKind::And: {
      auto n = flip(FKind::Or);
      n->left = rawNegate(r->left, local);
      n->right = rawNegate(r->right, local);
      return n;
    }
    case FKind::Or: {
      auto n = flip(FKind::And);
      n->left = rawNegate(r->left, local);
      n->right = rawNegate(r->right, local);
      return n;
    }
    case FKind::Box: {
      auto n = flip(FKind::Diamond);
      n->left = rawNegate(r->left, local);
      return n;
    }
    case FKind::Diamond: {
      auto n = flip(FKind::Box);
      n->left = rawNegate(r->left, local);
      return n;
    }
    case FKind::Mu:
    case FKind::Nu: {
      auto n = flip(r->kind == FKind::Mu ? FKind::Nu : FKind::Mu);
      local.push_back(r->name);
      n->left = rawNegate(r->left, local);
      local.pop_back();
      return n;
    }
  }
  throw InternalError("unreachable raw kind");
}

struct Parser {
  Lexer lex;
  Token tok;
  explicit Parser(const std::string& s) : lex(s) { tok = lex.next(); }

  [[noreturn]] void fail(const std::string& what) {
    throw Error("syntax error at position " + std::to_string(tok.pos) + ": " + what);
  }
  void advance() { tok = lex.next(); }
  bool isSym(const std::string& s) const { return tok.kind == Token::Sym && tok.text == s; }
  void expectSym(const std::string& s) {
    if (!isSym(s)) fail("expected '" + s + "'");
    advance();
  }
  std::string expectName(const std::string& what) {
    if (tok.kind != Token::Name) fail("expected " + what);
    std::string n = tok.text;
    advance();
    return n;
  }

  RawPtr parsePhi() {
    RawPtr a = parseAnd();
    while (isSym("|")) {
      advance();
      RawPtr b = parseAnd();
      auto n = rawNode(FKind::Or);
      n->left = a;
      n->right = b;
      a = n;
    }
    return a;
  }

  RawPtr parseAnd() {
    RawPtr a = parseUnary();
    while (isSym("&")) {
      advance();
      RawPtr b = parseUnary();
      auto n = rawNode(FKind::And);
      n->left = a;
      n->right = b;
      a = n;
    }
    return a;
  }

  RawPtr parseUnary() {
    int pos = tok.pos;
    if (tok.kind == Token::Name) {
      if (tok.text == "true") { advance(); return rawNode(FKind::Top); }
      if (tok.text == "false") { advance(); return rawNode(FKind::Bot); }
      if (tok.text == "mu" || tok.text == "nu") {
        FKind k = tok.text == "mu" ? FKind::Mu : FKind::Nu;
        advance();
        std::string x = expectName("a variable name after the binder");
        expectSym(".");
        auto n = rawNode(k);
        n->name = x;
        n->left = parsePhi();
        n->pos = pos;
        return n;
      }
      auto n = rawNode(FKind::Atom);
      n->name = tok.text;
      n->pos = pos;
      advance();
      return n;
    }
    if (isSym("!")) {
      advance();
      std::vector<std::string> local;
      return rawNegate(parseUnary(), local);
    }
    if (isSym("(")) {
      advance();
      RawPtr r = parsePhi();
      expectSym(")");
      return r;
    }
    if (isSym("[") || isSym("<")) {
      bool box = isSym("[");
      advance();
      auto n = rawNode(box ? FKind::Box : FKind::Diamond);
      n->pos = pos;
      parseModBody(*n);
      expectSym(box ? "]" : ">");
      n->left = parseUnary();
      return n;
    }
    fail("expected a formula");
  }

  void parseModBody(Raw& n) {
    if (isSym("{")) {
      advance();
      if (!isSym("}")) {
        n.coalition.push_back(expectName("an agent name"));
        while (isSym(",")) {
          // A comma inside braces separates agents; after the closing brace
          // it introduces the commitment.
          advance();
          n.coalition.push_back(expectName("an agent name"));
        }
      }
      expectSym("}");
    } else {
      n.coalition.push_back(expectName("an agent name or '{'"));
    }
    if (isSym(",")) {
      advance();
      parseCommit(n);
      n.hasCommit = true;
    }
  }

  void parseCommit(Raw& n) {
    expectSym("(");
    parseJointTerm(n);
    while (isSym("|")) {
      advance();
      parseJointTerm(n);
    }
    expectSym(")");
  }

  // One '|'-separated term: a conjunction of agent:move(s) assignments.
  // Brace sets expand to the product of per-agent alternatives.
  void parseJointTerm(Raw& n) {
    std::vector<std::pair<std::string, std::vector<std::string>>> assigns;
    while (true) {
      std::string agent = expectName("an agent name");
      expectSym(":");
      std::vector<std::string> alts;
      if (isSym("{")) {
        advance();
        alts.push_back(expectName("a move name"));
        while (isSym("|")) {
          advance();
          alts.push_back(expectName("a move name"));
        }
        expectSym("}");
      } else {
        alts.push_back(expectName("a move name"));
      }
      assigns.emplace_back(agent, alts);
      if (!isSym(",")) break;
      advance();
    }
    std::vector<std::vector<std::pair<std::string, std::string>>> acc{{}};
    for (auto& [agent, alts] : assigns) {
      std::vector<std::vector<std::pair<std::string, std::string>>> next;
      for (auto& partial : acc)
        for (auto& mv : alts) {
          auto e = partial;
          e.emplace_back(agent, mv);
          next.push_back(std::move(e));
        }
      acc = std::move(next);
    }
    for (auto& jm : acc) n.commits.push_back(std::move(jm));
  }
};

// Collect every identifier so fresh binder names never collide.
void collectNames(const RawPtr& r, std::set<std::string>& names, std::set<std::string>& binders) {
  if (!r) return;
  if (!r->name.empty()) names.insert(r->name);
  if (r->kind == FKind::Mu || r->kind == FKind::Nu) binders.insert(r->name);
  for (auto& a : r->coalition) names.insert(a);
  for (auto& jm : r->commits)
    for (auto& [a, m] : jm) {
      names.insert(a);
      names.insert(m);
    }
  collectNames(r->left, names, binders);
  collectNames(r->right, names, binders);
}

void collectSignature(const RawPtr& r, std::set<std::string>& agents,
                      std::map<std::string, std::set<std::string>>& moves) {
  if (!r) return;
  for (auto& a : r->coalition) agents.insert(a);
  for (auto& jm : r->commits)
    for (auto& [a, m] : jm) {
      agents.insert(a);
      moves[a].insert(m);
    }
  collectSignature(r->left, agents, moves);
  collectSignature(r->right, agents, moves);
}

struct Resolver {
  const Signature& sig;
  std::set<std::string> used;            // identifiers already taken
  std::set<std::string> allBinders;      // binder names anywhere in the input
  std::vector<std::pair<std::string, std::string>> scope;  // original -> fresh
  std::set<std::string> emitted;         // binder names already produced

  // The first binder with a given name keeps it; later ones get a fresh
  // suffix that collides with no identifier in the input.
  std::string freshBinder(const std::string& base) {
    std::string cand = base;
    int k = 2;
    while (emitted.count(cand) || (cand != base && used.count(cand)))
      cand = base + "_" + std::to_string(k++);
    emitted.insert(cand);
    return cand;
  }

  FormulaPtr resolve(const RawPtr& r) {
    switch (r->kind) {
      case FKind::Top: return mkTop();
      case FKind::Bot: return mkBot();
      case FKind::Atom:
      case FKind::NegAtom: {
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == r->name) {
            if (r->kind == FKind::NegAtom)
              throw Error("negation applied to fixpoint variable '" + r->name + "'");
            return mkVar(it->second);
          }
        if (allBinders.count(r->name))
          throw Error("unbound variable '" + r->name + "'");
        return r->kind == FKind::Atom ? mkAtom(r->name) : mkNegAtom(r->name);
      }
      case FKind::Var:
        throw InternalError("raw tree has no Var nodes");
      case FKind::And: return mkAnd(resolve(r->left), resolve(r->right));
      case FKind::Or: return mkOr(resolve(r->left), resolve(r->right));
      case FKind::Box:
      case FKind::Diamond: {
        std::vector<AgentId> c;
        for (auto& name : r->coalition) {
          int a = sig.agentIndex(name);
          if (a < 0) throw Error("unknown agent '" + name + "'");
          c.push_back(a);
        }
        Commitment o;
        if (!r->hasCommit) {
          o = Commitment::empty();
        } else {
          std::set<std::vector<AgentId>> domains;
          for (auto& jm : r->commits) {
            JointNamed named;
            for (auto& [aname, mname] : jm) {
              int a = sig.agentIndex(aname);
              if (a < 0) throw Error("unknown agent '" + aname + "'");
              if (sig.moveIndex(a, mname) < 0)
                throw Error("unknown move name '" + mname + "' for agent '" + aname + "'");
              if (named.moveOf(a))
                throw Error("agent '" + aname + "' assigned twice in a joint move");
              named.parts.emplace_back(a, mname);
            }
            std::sort(named.parts.begin(), named.parts.end());
            domains.insert(named.domain());
            o.moves.push_back(std::move(named));
          }
          if (domains.size() != 1)
            throw Error("all joint moves of a commitment must cover the same agents");
          o.agents = *domains.begin();
        }
        FormulaPtr body = resolve(r->left);
        return r->kind == FKind::Box ? mkBox(c, o, body, sig.nAgents())
                                     : mkDiamond(c, o, body, sig.nAgents());
      }
      case FKind::Mu:
      case FKind::Nu: {
        std::string fresh = freshBinder(r->name);
        scope.emplace_back(r->name, fresh);
        FormulaPtr body = resolve(r->left);
        scope.pop_back();
        return r->kind == FKind::Mu ? mkMu(fresh, body) : mkNu(fresh, body);
      }
    }
    throw InternalError("unreachable raw kind");
  }
};

}  // namespace

// Numeric-aware order: all-digit names sort numerically and before
// alphabetic ones; everything else is plain lexicographic.
bool agentNameLess(const std::string& a, const std::string& b) {
  auto numeric = [](const std::string& s) {
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) {
      return std::isdigit(c);
    });
  };
  bool na = numeric(a), nb = numeric(b);
  if (na != nb) return na;
  if (na && nb) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  }
  return a < b;
}

static ParseResult parseMerged(const std::string& text, const std::optional<Signature>& given,
                               const std::vector<std::string>& extraAgents) {
  Parser p(text);
  RawPtr raw = p.parsePhi();
  if (p.tok.kind != Token::End)
    throw Error("syntax error at position " + std::to_string(p.tok.pos) +
                ": trailing input '" + p.tok.text + "'");

  Signature sig;
  if (given) {
    sig = *given;
  } else {
    std::set<std::string> agents;
    std::map<std::string, std::set<std::string>> moves;
    collectSignature(raw, agents, moves);
    agents.insert(extraAgents.begin(), extraAgents.end());
    sig.agents.assign(agents.begin(), agents.end());
    std::sort(sig.agents.begin(), sig.agents.end(), agentNameLess);
    sig.moves.resize(sig.agents.size());
    for (int i = 0; i < sig.nAgents(); ++i) {
      auto it = moves.find(sig.agents[i]);
      if (it != moves.end()) sig.moves[i].assign(it->second.begin(), it->second.end());
    }
  }

  Resolver res{sig, {}, {}, {}, {}};
  collectNames(raw, res.used, res.allBinders);
  for (auto& a : sig.agents) res.used.insert(a);
  ParseResult out;
  out.formula = res.resolve(raw);
  out.sig = std::move(sig);
  return out;
}

ParseResult parse(const std::string& text, const std::optional<Signature>& given) {
  return parseMerged(text, given, {});
}

ParseResult parseWiden(const std::string& text, const std::vector<std::string>& extraAgents) {
  return parseMerged(text, {}, extraAgents);
}

// --------------------------------------------------------------- operations

FormulaPtr nnfNegate(const FormulaPtr& f, int nAgents) {
  switch (f->kind) {
    case FKind::Top: return mkBot();
    case FKind::Bot: return mkTop();
    case FKind::Atom: return mkNegAtom(f->name);
    case FKind::NegAtom: return mkAtom(f->name);
    case FKind::Var: return mkVar(f->name);
    case FKind::And: return mkOr(nnfNegate(f->left, nAgents), nnfNegate(f->right, nAgents));
    case FKind::Or: return mkAnd(nnfNegate(f->left, nAgents), nnfNegate(f->right, nAgents));
    case FKind::Box:
      return mkDiamond(f->coalition, f->commitment, nnfNegate(f->left, nAgents), nAgents);
    case FKind::Diamond:
      return mkBox(f->coalition, f->commitment, nnfNegate(f->left, nAgents), nAgents);
    case FKind::Mu: return mkNu(f->name, nnfNegate(f->left, nAgents));
    case FKind::Nu: return mkMu(f->name, nnfNegate(f->left, nAgents));
  }
  throw InternalError("unreachable formula kind");
}

FormulaPtr substitute(const FormulaPtr& f, const std::string& x, const FormulaPtr& r) {
  switch (f->kind) {
    case FKind::Top:
    case FKind::Bot:
    case FKind::Atom:
    case FKind::NegAtom:
      return f;
    case FKind::Var:
      return f->name == x ? r : f;
    case FKind::And:
      return mkAnd(substitute(f->left, x, r), substitute(f->right, x, r));
    case FKind::Or:
      return mkOr(substitute(f->left, x, r), substitute(f->right, x, r));
    case FKind::Box:
    case FKind::Diamond: {
      auto n = std::make_shared<Formula>(*f);
      n->left = substitute(f->left, x, r);
      return n;
    }
    case FKind::Mu:
    case FKind::Nu: {
      if (f->name == x) return f;  // shadowed (cannot happen with distinct binders)
      auto n = std::make_shared<Formula>(*f);
      n->left = substitute(f->left, x, r);
      return n;
    }
  }
  throw InternalError("unreachable formula kind");
}

FormulaPtr unfold(const FormulaPtr& fix) {
  if (!fix->isFix()) throw Error("unfold requires a fixpoint formula");
  return substitute(fix->left, fix->name, fix);
}

std::set<std::string> freeVars(const FormulaPtr& f) {
  std::set<std::string> out;
  std::vector<std::string> bound;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    switch (g->kind) {
      case FKind::Var:
        if (std::find(bound.begin(), bound.end(), g->name) == bound.end()) out.insert(g->name);
        return;
      case FKind::Mu:
      case FKind::Nu:
        bound.push_back(g->name);
        go(g->left);
        bound.pop_back();
        return;
      default:
        if (g->left) go(g->left);
        if (g->right) go(g->right);
        return;
    }
  };
  go(f);
  return out;
}

std::set<std::string> atomNames(const FormulaPtr& f) {
  std::set<std::string> out;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (g->kind == FKind::Atom || g->kind == FKind::NegAtom) out.insert(g->name);
    if (g->left) go(g->left);
    if (g->right) go(g->right);
  };
  go(f);
  return out;
}

static FormulaPtr canonicalizeBinders(const FormulaPtr& f, int& counter,
                                      std::vector<std::pair<std::string, std::string>>& scope) {
  switch (f->kind) {
    case FKind::Top:
    case FKind::Bot:
    case FKind::Atom:
    case FKind::NegAtom:
      return f;
    case FKind::Var: {
      for (auto it = scope.rbegin(); it != scope.rend(); ++it)
        if (it->first == f->name) return mkVar(it->second);
      return f;
    }
    case FKind::And:
      return mkAnd(canonicalizeBinders(f->left, counter, scope),
                   canonicalizeBinders(f->right, counter, scope));
    case FKind::Or:
      return mkOr(canonicalizeBinders(f->left, counter, scope),
                  canonicalizeBinders(f->right, counter, scope));
    case FKind::Box:
    case FKind::Diamond: {
      auto n = std::make_shared<Formula>(*f);
      n->left = canonicalizeBinders(f->left, counter, scope);
      return n;
    }
    case FKind::Mu:
    case FKind::Nu: {
      std::string fresh = "__v" + std::to_string(counter++);
      scope.emplace_back(f->name, fresh);
      FormulaPtr body = canonicalizeBinders(f->left, counter, scope);
      scope.pop_back();
      auto n = std::make_shared<Formula>(*f);
      n->name = fresh;
      n->left = body;
      return n;
    }
  }
  throw InternalError("unreachable formula kind");
}

bool alphaEq(const FormulaPtr& a, const FormulaPtr& b, const Signature& sig) {
  int ca = 0, cb = 0;
  std::vector<std::pair<std::string, std::string>> sa, sb;
  return print(canonicalizeBinders(a, ca, sa), sig) == print(canonicalizeBinders(b, cb, sb), sig);
}

// ------------------------------------------------------------------- closure

namespace {

// Static binder depth per variable; well-defined because binders are
// pairwise distinct, so every binder occurs exactly once.
void binderDepths(const FormulaPtr& f, int depth, std::map<std::string, int>& out,
                  std::map<std::string, bool>& isMu) {
  if (f->isFix()) {
    out[f->name] = depth;
    isMu[f->name] = f->kind == FKind::Mu;
    binderDepths(f->left, depth + 1, out, isMu);
    return;
  }
  if (f->left) binderDepths(f->left, depth, out, isMu);
  if (f->right) binderDepths(f->right, depth, out, isMu);
}

struct Tarjan {
  const std::vector<std::vector<int>>& g;
  std::vector<int> idx, low, comp;
  std::vector<int> stack;
  std::vector<bool> onStack;
  int counter = 0, comps = 0;

  explicit Tarjan(const std::vector<std::vector<int>>& graph)
      : g(graph), idx(graph.size(), -1), low(graph.size()), comp(graph.size(), -1),
        onStack(graph.size(), false) {
    for (int v = 0; v < int(g.size()); ++v)
      if (idx[v] < 0) dfs(v);
  }

  void dfs(int v) {
    idx[v] = low[v] = counter++;
    stack.push_back(v);
    onStack[v] = true;
    for (int w : g[v]) {
      if (idx[w] < 0) {
        dfs(w);
        low[v] = std::min(low[v], low[w]);
      } else if (onStack[w]) {
        low[v] = std::min(low[v], idx[w]);
      }
    }
    if (low[v] == idx[v]) {
      int c = comps++;
      while (true) {
        int w = stack.back();
        stack.pop_back();
        onStack[w] = false;
        comp[w] = c;
        if (w == v) break;
      }
    }
  }
};

}  // namespace

int Closure::indexOf(const FormulaPtr& f, const Signature& sig) const {
  auto it = index.find(print(f, sig));
  return it == index.end() ? -1 : it->second;
}

Closure closure(const FormulaPtr& f, const Signature& sig, int maxSize) {
  if (!freeVars(f).empty()) throw Error("closure requires a closed formula");

  std::map<std::string, int> depth;
  std::map<std::string, bool> isMu;
  binderDepths(f, 0, depth, isMu);
  int maxDepth = 0;
  for (auto& [x, d] : depth) maxDepth = std::max(maxDepth, d);

  Closure cl;
  auto add = [&](const FormulaPtr& g) -> int {
    std::string key = print(g, sig);
    auto it = cl.index.find(key);
    if (it != cl.index.end()) return it->second;
    if (int(cl.items.size()) >= maxSize)
      throw BudgetExceeded("closure size exceeds budget of " + std::to_string(maxSize));
    int id = int(cl.items.size());
    ClosureEntry e;
    e.f = g;
    e.key = std::move(key);
    if (g->isFix()) {
      auto d = depth.find(g->name);
      if (d == depth.end()) throw InternalError("fixpoint variable missing a static depth");
      e.priority = 2 * (maxDepth - d->second) + (g->kind == FKind::Mu ? 1 : 2);
    }
    cl.items.push_back(std::move(e));
    cl.index.emplace(cl.items.back().key, id);
    cl.succ.emplace_back();
    return id;
  };

  cl.root = add(f);
  for (int i = 0; i < int(cl.items.size()); ++i) {
    const FormulaPtr g = cl.items[i].f;
    std::vector<int> next;
    switch (g->kind) {
      case FKind::And:
      case FKind::Or:
        next = {add(g->left), add(g->right)};
        break;
      case FKind::Box:
      case FKind::Diamond:
        next = {add(g->left)};
        break;
      case FKind::Mu:
      case FKind::Nu:
        next = {add(unfold(g))};
        break;
      case FKind::Var:
        throw InternalError("variable surfaced in the closure of a closed formula");
      default:
        break;
    }
    cl.succ[i] = std::move(next);
  }

  for (auto& e : cl.items) cl.maxPriority = std::max(cl.maxPriority, e.priority);

  Tarjan t(cl.succ);
  int n = int(cl.items.size());
  std::vector<bool> cyclic(t.comps, false), hasMu(t.comps, false), hasNu(t.comps, false);
  for (int v = 0; v < n; ++v) {
    cl.items[v].sccId = t.comp[v];
    for (int w : cl.succ[v])
      if (t.comp[w] == t.comp[v]) {
        cyclic[t.comp[v]] = true;
        if (cl.items[v].f->kind == FKind::Mu) hasMu[t.comp[v]] = true;
        if (cl.items[v].f->kind == FKind::Nu) hasNu[t.comp[v]] = true;
      }
  }
  for (int c = 0; c < t.comps; ++c)
    if (cyclic[c] && hasMu[c] && hasNu[c]) cl.alternationFree = false;
  for (int v = 0; v < n; ++v) {
    int c = t.comp[v];
    cl.items[v].badState = cyclic[c] && hasMu[c] && !hasNu[c];
  }
  return cl;
}

}  // namespace amcdes
