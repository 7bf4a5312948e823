#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "amcdes/formula.hpp"
#include "amcdes/onestep.hpp"
#include "amcdes/util.hpp"

namespace amcdes {

// Textual one-step problem format. Lines, in any order except that headers
// come first:
//
//   # comment                          (also blank lines: skipped)
//   agents: 3                          (agent universe named "1".."3"), or
//   agents: Alice, Bob, Env            (named agents)
//   carrier: 2                         (size of the outcome carrier W)
//   [{1}, (2:{m})] a                   (one modal atom per line; the body
//   <{2}> b                             names the one-step variable)
//   tau a = {0}                        (carrier subset per variable; every
//   tau b = {0, 1}                      variable needs exactly one entry)
//
// The agents header is optional: without it the universe is inferred from
// the atoms. Variable ids follow first appearance across the atom lines.
struct OneStepProblem {
  Signature sig;
  int carrier = 0;
  std::vector<ModalAtom> atoms;
  std::vector<Bitset> tau;            // indexed by variable id
  std::vector<std::string> varNames;  // variable id -> name
};

OneStepProblem loadOneStepProblem(std::istream& in);
OneStepProblem loadOneStepProblemFile(const std::string& path);
std::string showOneStepProblem(const OneStepProblem& p);

}  // namespace amcdes
