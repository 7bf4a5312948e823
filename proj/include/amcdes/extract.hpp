#pragma once

#include <optional>
#include <vector>

#include "amcdes/onestep.hpp"
#include "amcdes/util.hpp"

namespace amcdes {

// Finite-domain constraint problem over outcome cells: each cell takes
// a carrier value; a clause requires some literal (cell, allowed set)
// to hold. Unit requirements are folded into per-cell domains.
class CellCsp {
 public:
  explicit CellCsp(int carrier) : carrier_(carrier) {}

  int addCell() {
    domains_.push_back(Bitset::full(carrier_));
    return int(domains_.size()) - 1;
  }
  void restrictCell(int cell, const Bitset& allowed) { domains_[cell] &= allowed; }

  struct Clause {
    std::vector<std::pair<int, Bitset>> literals;  // (cell, allowed values)
  };
  void addClause(Clause c) { clauses_.push_back(std::move(c)); }

  int cellCount() const { return int(domains_.size()); }
  // One value per cell satisfying all domains and clauses, or nullopt.
  // Deterministic; throws BudgetExceeded past stepCap search steps.
  std::optional<std::vector<int>> solve(long long stepCap = 50000000) const;

 private:
  int carrier_;
  std::vector<Bitset> domains_;
  std::vector<Clause> clauses_;
};

// Builds a finite one-step game satisfying every atom of xi, assuming
// oneStepTableauSat(xi, tau) holds. Each agent receives the same moves:
// one witness per box, one per occurring explicit-move name, and one
// per (diamond, color) pair with colors drawn from Z/βZ. Skolem-style
// responses for a diamond place the color that makes the whole joint
// move sum to that diamond's designated color, on the least responding
// agent. Throws InternalError if the construction cannot be completed
// or fails verification — callers must treat that as a defect, not as
// an unsat verdict.
OneStepGame extractOneStepModel(const std::vector<ModalAtom>& xi, const std::vector<Bitset>& tau,
                                int carrier, int nAgents, long long stepCap = 50000000,
                                bool zeroColors = false);

}  // namespace amcdes
