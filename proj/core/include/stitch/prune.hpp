#pragma once

#include <map>
#include <vector>

#include "stitch/encode.hpp"
#include "stitch/mutate.hpp"
#include "stitch/scope.hpp"
#include "stitch/solver.hpp"

namespace stitch {

// The k-variabilization of a method for a pinned failing input: every
// replication of the k bottom-most mutable statements is replaced by an
// abstraction covering anything a catalog mutation of that statement could
// do. Assignments become fresh-valued writes to any mutation-reachable
// target, guards become fresh booleans, returns return fresh values. The
// contract pins the input and asks for a passing completion, so Unsat means
// no mutation of those statements can fix this input.
struct VariabilizedMethod {
  Method method;  // contracts/signature context
  UnrolledMethod body;
  FreshLedger ledger;
  Input pinned;
  int level = 0;
  std::vector<int> mutableIds;  // bottom-up coordinates the level refers to
};

// `formsById` carries, per mutable statement, the assignment targets its
// mutations can reach (writeTargetForms of the method the vector coordinates
// belong to). `m` may already be a mutant of that method.
VariabilizedMethod variabilize(const Program& p, const Method& m,
                               const std::vector<int>& mutableIdsBottomUp,
                               const std::map<int, std::vector<UnrolledStmt::WriteForm>>& formsById,
                               const Input& failing, int level, const Scope& s);

// Convenience: coordinates and forms derived from `m` itself.
VariabilizedMethod variabilize(const Program& p, const Method& m, const Input& failing, int level,
                               const Scope& s, const OperatorSet& ops = OperatorSet::all());

Encoding encodeVariabilized(const Program& p, const VariabilizedMethod& vm, const Scope& s);

struct Feedback {
  int k = 0;  // consecutive Unsat levels from the bottom: that many mutable
              // statements' mutation combinations are skippable for the input
  struct Level {
    int level = 0;
    int stmtId = 0;  // statement variabilized at this level
    VerdictKind verdict = VerdictKind::Unknown;
  };
  std::vector<Level> trail;
  bool sawUnknown = false;  // Unknown is treated as Sat: prune less, never more
};

Feedback getFeedback(const Program& p, const Method& m,
                     const std::vector<int>& mutableIdsBottomUp,
                     const std::map<int, std::vector<UnrolledStmt::WriteForm>>& formsById,
                     const Input& failing, const Scope& s, const SolveLimits& limits = {},
                     uint64_t seed = 0);

Feedback getFeedback(const Program& p, const Method& m, const Input& failing, const Scope& s,
                     const OperatorSet& ops = OperatorSet::all(), const SolveLimits& limits = {},
                     uint64_t seed = 0);

}  // namespace stitch
