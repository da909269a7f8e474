#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stitch/ast.hpp"
#include "stitch/scope.hpp"
#include "stitch/value.hpp"

namespace stitch {

enum class RunOutcome {
  PassedContract,
  ViolatedPost,       // ensures false (or its evaluation trapped) at exit
  ViolatedInvariant,  // invariant false (or trapped) at exit
  NullDeref,
  DivByZero,
  ScopeExceededLoop,  // more iterations than the unroll bound on some loop entry
  ScopeExceededHeap,  // `new` with no dead slot left
  StepLimit,
  PreViolated,  // defensive: input did not satisfy requires/invariant on entry
};

const char* runOutcomeName(RunOutcome o);

// Contract violation (as opposed to passing or falling outside the bounded
// execution universe).
bool isViolation(RunOutcome o);
// Outside the bounded universe: neither pass nor fail.
bool isOutOfScope(RunOutcome o);

struct StepLimits {
  int unrollBound = 3;
  int64_t maxSteps = 0;  // 0: derive as unrollBound * statementCount * 4

  static StepLimits forMethod(const Method& m, const Scope& s);
};

struct TraceStep {
  int stmtId = 0;
  int dynIndex = 0;  // how many times this statement had executed before
};

struct ExecResult {
  RunOutcome outcome = RunOutcome::PassedContract;
  Value result;  // meaningful when the method returned a value
  bool returned = false;
  ConcreteHeap finalHeap;
  std::vector<TraceStep> trace;
};

// Deterministic big-step interpretation of `m` on `in`, jointly checking the
// contract: requires && invariant on entry (defensively), ensures && invariant
// on exit against an entry-state snapshot for \old.
ExecResult execute(const Program& p, const Method& m, const Input& in, const StepLimits& limits,
                   int intWidth);

// Evaluates requires && invariant (plus the implicit `this != null`) on the
// entry state; evaluation traps count as false.
bool satisfiesPre(const Program& p, const Method& m, const Input& in, int intWidth);

// Append-only, duplicate-free pool of failing inputs for one method under
// repair. Entries must satisfy the method's precondition.
class InputPool {
 public:
  // Returns true when actually appended (idempotent on duplicates). Throws
  // std::invalid_argument when `in` violates the precondition.
  bool add(const Program& p, const Method& m, const Input& in, int intWidth);
  const std::vector<Input>& inputs() const { return inputs_; }
  size_t size() const { return inputs_.size(); }
  bool empty() const { return inputs_.empty(); }

 private:
  std::vector<Input> inputs_;
  std::set<std::string> seen_;
};

struct SieveResult {
  bool passed = true;
  std::optional<Input> witness;  // first failing input
  RunOutcome witnessOutcome = RunOutcome::PassedContract;
};

// Fast rejection: runs the candidate on every pooled input. Out-of-scope
// outcomes count as pass-within-scope; a contract violation fails with the
// first such input as witness.
SieveResult sieve(const Program& p, const Method& candidate, const InputPool& pool,
                  const StepLimits& limits, int intWidth);

}  // namespace stitch
