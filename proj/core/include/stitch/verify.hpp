#pragma once

#include <optional>

#include "stitch/encode.hpp"
#include "stitch/interp.hpp"
#include "stitch/scope.hpp"
#include "stitch/solver.hpp"

namespace stitch {

struct Counterexample {
  Input input;
  ExecResult replay;
};

struct DetectResult {
  enum class Kind { Correct, Faulty, Unknown };
  Kind kind = Kind::Unknown;
  bool vacuous = false;  // Correct with no in-scope pre-state at all
  std::optional<Counterexample> cex;
  SolverStats stats;

  bool correct() const { return kind == Kind::Correct; }
  bool faulty() const { return kind == Kind::Faulty; }
  bool unknown() const { return kind == Kind::Unknown; }
};

// Bounded fault detection: Correct iff the correctness encoding is unsat
// within the scope. Counterexamples are decoded and replay-verified. Solver
// resource aborts surface as Unknown, never as Correct.
DetectResult detect(const Program& p, const Method& m, const Scope& s,
                    const SolveLimits& limits = {}, uint64_t seed = 0);

struct AcceptResult {
  enum class Kind { Accepted, Rejected, Unknown };
  Kind kind = Kind::Unknown;
  std::optional<Counterexample> cex;  // on Rejected; also appended to the pool
  SolverStats stats;

  bool accepted() const { return kind == Kind::Accepted; }
};

// Final candidate assessment. A rejecting counterexample joins the pool so
// later candidates are sieved against it. Unknown rejects conservatively.
AcceptResult accept(const Program& p, const Method& candidate, const Scope& s, InputPool& pool,
                    const SolveLimits& limits = {}, uint64_t seed = 0);

}  // namespace stitch
