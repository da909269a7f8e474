#pragma once

#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "stitch/ast.hpp"
#include "stitch/cnf.hpp"
#include "stitch/scope.hpp"
#include "stitch/value.hpp"

namespace stitch::test {

// Reference DPLL with unit propagation; complete, independent of the CDCL
// implementation. Intended for <= ~40 variables.
bool dpllSat(const Cnf& f);

// Random k-SAT instance (fixed clause width 3).
Cnf randomCnf(std::mt19937_64& rng, int vars, int clauses);

// Loads a corpus source file (name relative to the corpus directory).
std::string readCorpusFile(const std::string& name);
Program loadCorpusProgram(const std::string& name);

// Random in-scope input for a method: prefix-live heaps, ref fields pointing
// at live slots or null, ints across the width range. Not filtered by the
// precondition.
Input randomInput(std::mt19937_64& rng, const Program& p, const Method& m, const Scope& s);

// Random input satisfying the precondition, or nullopt after maxTries draws.
std::optional<Input> randomValidInput(std::mt19937_64& rng, const Program& p, const Method& m,
                                      const Scope& s, int maxTries = 200);

// Brute-force check behind the pruning claim: after feedback k on input I,
// every combination of single mutations of S_1..S_k (others untouched) must
// fail I. `passing` > 0 is a soundness violation.
struct PruneSoundnessReport {
  uint64_t combosTried = 0;
  uint64_t passing = 0;
};
PruneSoundnessReport pruneSoundnessOracle(const Program& p, const Method& m, const Input& input,
                                          int k, const Scope& s);

// All distinct mutants reachable within the per-statement budgets: the
// statement-wise closure of single mutations, crossed. Digest set matches the
// driver's enumeration when pruning is off.
std::set<uint64_t> bruteForceMutantDigests(const Program& p, const Method& m);

}  // namespace stitch::test
