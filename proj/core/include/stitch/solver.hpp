#pragma once

#include <cstdint>
#include <vector>

#include "stitch/cnf.hpp"

namespace stitch {

enum class VerdictKind { Sat, Unsat, Unknown };

struct Verdict {
  VerdictKind kind = VerdictKind::Unknown;
  std::vector<bool> model;     // one entry per formula variable when Sat
  std::vector<GroupId> core;   // ascending; groups used in the refutation when Unsat

  bool sat() const { return kind == VerdictKind::Sat; }
  bool unsat() const { return kind == VerdictKind::Unsat; }
  bool unknown() const { return kind == VerdictKind::Unknown; }
};

struct SolveLimits {
  int64_t maxConflicts = -1;  // < 0: unlimited
};

struct SolverStats {
  int64_t conflicts = 0;
  int64_t decisions = 0;
  int64_t propagations = 0;
  int64_t restarts = 0;
};

// Complete CDCL search (watched literals, activity ordering, phase saving,
// Luby restarts). Deterministic for a fixed seed. A conflict-budget abort is
// reported as Unknown, never as Unsat. When the formula is unsat, the core
// lists the clause groups used by the refutation (not necessarily minimal;
// empty when the untagged clauses alone are unsat).
Verdict solve(const Cnf& f, const std::vector<Lit>& assumptions = {},
              const SolveLimits& limits = {}, uint64_t seed = 0, SolverStats* stats = nullptr);

// Like solve, but only clauses whose group is in `enabled` (plus untagged
// clauses) participate. The core is a subset of `enabled`.
Verdict solveWithGroups(const Cnf& f, const std::vector<GroupId>& enabled,
                        const std::vector<Lit>& assumptions = {}, const SolveLimits& limits = {},
                        uint64_t seed = 0, SolverStats* stats = nullptr);

// Deletion-based group-core minimization. The result is unsat and a subset of
// `core`; deletion-minimal when the budget (solve calls) suffices, otherwise
// best-so-far. `core` must be unsat to begin with.
std::vector<GroupId> minimizeCore(const Cnf& f, std::vector<GroupId> core, int maxSolveCalls = 256,
                                  const SolveLimits& perCall = {}, uint64_t seed = 0);

// True when `model` satisfies every clause of `f` whose group is enabled
// (all clauses when `enabled` is nullptr).
bool modelSatisfies(const Cnf& f, const std::vector<bool>& model,
                    const std::vector<GroupId>* enabled = nullptr);

}  // namespace stitch
