#pragma once

#include <cstdlib>
#include <string>

#include "amcdes/util.hpp"

namespace amcdes {

// Resource limits for the decision procedures. The environment variable
// AMCDES_BUDGET scales every limit: it holds a single integer K (default 64),
// interpreted as the closure-size cap; the other caps scale linearly in K/64.
struct Budgets {
  int closureSize = 64;        // formulas in the closure
  int detStates = 20000;       // deterministic tracking states
  int gameNodes = 400000;      // tableau game nodes
  long long derivedClauses = 100000;  // resolution cap
  long long ruleInstances = 200000;   // one-step rule instances per sequent
  long long workSteps = 50000000;     // generic loop guard (openCheck etc.)

  static Budgets scaled(int k) {
    Budgets b;
    double f = double(k) / 64.0;
    b.closureSize = k;
    b.detStates = int(b.detStates * f) + 1;
    b.gameNodes = int(b.gameNodes * f) + 1;
    b.derivedClauses = (long long)(b.derivedClauses * f) + 1;
    b.ruleInstances = (long long)(b.ruleInstances * f) + 1;
    b.workSteps = (long long)(b.workSteps * f) + 1;
    return b;
  }

  static Budgets fromEnv() {
    const char* s = std::getenv("AMCDES_BUDGET");
    if (!s || !*s) return Budgets{};
    char* end = nullptr;
    long k = std::strtol(s, &end, 10);
    if (end == s || *end != '\0' || k <= 0)
      throw Error("AMCDES_BUDGET must be a positive integer, got '" + std::string(s) + "'");
    return scaled(int(k));
  }
};

}  // namespace amcdes
