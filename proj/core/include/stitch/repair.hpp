#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "stitch/localize.hpp"
#include "stitch/mutate.hpp"
#include "stitch/prune.hpp"
#include "stitch/scope.hpp"
#include "stitch/verify.hpp"

namespace stitch {

enum class LocalizationMode { OracleAnnotations, UnsatCore };

struct RepairConfig {
  Scope scope;
  int perStatementBudget = 1;  // budget given to localized statements
  int maxTotalDepth = 4;       // bound on successive mutation generations
  bool pruning = true;
  OperatorSet operators = OperatorSet::all();
  uint64_t seed = 0;
  double timeoutSeconds = 600.0;
  LocalizationMode localization = LocalizationMode::OracleAnnotations;
  int cexCount = 3;         // failing inputs collected for core localization
  double threshold = 1.0;   // "consistently highlighted" fraction
  SolveLimits solver;       // per-query budget; Unknown marks the run non-exhaustive
  bool collectMutantDigests = false;  // record every distinct visited mutant
};

enum class RepairOutcome { Fixed, NotFixable, Timeout, NonExhaustive };

const char* repairOutcomeName(RepairOutcome o);

struct RepairReport {
  RepairOutcome outcome = RepairOutcome::NotFixable;
  bool alreadyCorrect = false;
  std::string methodName;
  std::string fixedSource;  // pretty-printed fixed method when Fixed
  std::vector<std::string> provenance;  // vectors applied from the original

  // candidate accounting; generated = duplicates + sievedOut + verifierRejected + accepted
  uint64_t candidatesGenerated = 0;
  uint64_t duplicates = 0;
  uint64_t sievedOut = 0;
  uint64_t verifierRejected = 0;  // includes conservative Unknown rejections
  uint64_t accepted = 0;
  uint64_t enqueued = 0;
  uint64_t prunedSkipped = 0;  // vectors jumped over, counted arithmetically

  // solver accounting
  uint64_t detectQueries = 0;
  uint64_t acceptQueries = 0;
  uint64_t feedbackQueries = 0;
  double detectSeconds = 0, acceptSeconds = 0, feedbackSeconds = 0;

  std::vector<uint64_t> poolSizes;  // trajectory after each growth

  struct FeedbackEvent {
    std::string baseVector;  // vector of the candidate that failed
    int k = 0;
    uint64_t skipped = 0;
    bool abandonedBase = false;  // k == m: remaining vectors of this base dropped
    std::vector<Feedback::Level> levels;
  };
  std::vector<FeedbackEvent> feedbackTrail;

  bool nonExhaustive = false;  // some query returned Unknown
  double seconds = 0;
  std::optional<SuspiciousReport> localization;
  std::set<uint64_t> mutantDigests;  // when cfg.collectMutantDigests

  uint64_t searchSpaceEstimate = 0;  // geometric-model ballpark for the report
};

std::string repairReportJson(const RepairReport& r);

// The whole pipeline: detect, localize (or trust the source annotations),
// then the queue-driven bounded-exhaustive mutation search with optional
// variabilization pruning. Any Fixed result is verifier-accepted at
// cfg.scope and clean on every pooled input.
RepairReport repair(const Program& p, const std::string& methodName, const RepairConfig& cfg);

// Exact geometric sum (b^(d+1) - 1) / (b - 1); throws std::overflow_error
// when it exceeds uint64, std::invalid_argument unless b >= 2, d >= 0.
uint64_t estimateSpace(uint64_t b, uint64_t d);

}  // namespace stitch
