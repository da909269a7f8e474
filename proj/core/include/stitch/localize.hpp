#pragma once

#include <map>
#include <vector>

#include "stitch/verify.hpp"

namespace stitch {

struct SuspiciousReport {
  int coreCount = 0;               // refutation cores actually computed
  std::map<int, int> hitCounts;    // statement id -> cores naming it
  std::vector<int> selected;       // suspicious statement ids, ascending
  std::map<int, SrcPos> spans;     // source positions of hit statements
};

std::string suspiciousReportJson(const SuspiciousReport& r);

// Repeated fault detection with input blocking: up to `count` distinct
// failing inputs (fewer when the method runs out of in-scope violations).
std::vector<Counterexample> collectCounterexamples(const Program& p, const Method& m,
                                                   const Scope& s, int count,
                                                   const SolveLimits& limits = {},
                                                   uint64_t seed = 0);

// Unsat-core localization: one trace-refutation per counterexample, cores
// minimized and mapped to statements (contract conjunct groups are ignored;
// loop replicas collapse onto their original statement). A statement is
// suspicious when it appears in at least `threshold` of the cores
// (1.0 = all of them). Each input must replay to a violation.
SuspiciousReport localize(const Program& p, const Method& m, const std::vector<Input>& cexs,
                          const Scope& s, double threshold = 1.0,
                          const SolveLimits& limits = {}, uint64_t seed = 0);

// Copy of `m` with mutGenLimit = perStatementBudget on the selected
// statements and 0 everywhere else.
Method annotate(const Method& m, const SuspiciousReport& r, int perStatementBudget);

}  // namespace stitch
