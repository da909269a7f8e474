#include "stitch/repair.hpp"

#include <chrono>
#include <limits>
#include <deque>
#include <map>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "stitch/pretty.hpp"

namespace stitch {

const char* repairOutcomeName(RepairOutcome o) {
  switch (o) {
    case RepairOutcome::Fixed: return "Fixed";
    case RepairOutcome::NotFixable: return "NotFixable";
    case RepairOutcome::Timeout: return "Timeout";
    case RepairOutcome::NonExhaustive: return "NonExhaustive";
  }
  return "?";
}

uint64_t estimateSpace(uint64_t b, uint64_t d) {
  if (b < 2) throw std::invalid_argument("estimateSpace: b must be >= 2");
  // (b^(d+1) - 1) / (b - 1) with overflow checking
  uint64_t pow = 1;
  for (uint64_t i = 0; i < d + 1; i++) {
    if (pow > std::numeric_limits<uint64_t>::max() / b)
      throw std::overflow_error("estimateSpace overflow");
    pow *= b;
  }
  return (pow - 1) / (b - 1);
}

namespace {

using Clock = std::chrono::steady_clock;

double secondsSince(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Queued {
  Method method;
  int depth = 0;
  uint64_t digest = 0;
  std::vector<std::string> provenance;
};

bool anyBudget(const Method& m) {
  for (auto* s : m.allStatements())
    if (s->mutGenLimit > 0) return true;
  return false;
}

struct TimeoutHit {};

class RepairRun {
 public:
  RepairRun(const Program& p, const Method& original, const RepairConfig& cfg)
      : p_(p), original_(original), cfg_(cfg), t0_(Clock::now()) {
    rep_.methodName = original.name;
  }

  RepairReport run() {
    rep_.seconds = 0;
    try {
      detectAndLocalize();
      if (rep_.outcome == RepairOutcome::Fixed) {
        finish();
        return rep_;
      }
      driveQueue();
    } catch (const TimeoutHit&) {
      rep_.outcome = RepairOutcome::Timeout;
    }
    finish();
    return rep_;
  }

 private:
  void finish() { rep_.seconds = secondsSince(t0_); }

  void checkDeadline() {
    if (secondsSince(t0_) > cfg_.timeoutSeconds) throw TimeoutHit{};
  }

  void detectAndLocalize() {
    auto t = Clock::now();
    DetectResult d = detect(p_, original_, cfg_.scope, cfg_.solver, cfg_.seed);
    rep_.detectQueries++;
    rep_.detectSeconds += secondsSince(t);
    if (d.unknown()) {
      rep_.nonExhaustive = true;
      rep_.outcome = RepairOutcome::NonExhaustive;
      return;
    }
    if (d.correct()) {
      rep_.outcome = RepairOutcome::Fixed;
      rep_.alreadyCorrect = true;
      rep_.accepted = 1;
      rep_.fixedSource = prettyPrint(original_);
      return;
    }
    pool_.add(p_, original_, d.cex->input, cfg_.scope.intWidth);
    rep_.poolSizes.push_back(pool_.size());

    Method base = original_;
    if (cfg_.localization == LocalizationMode::UnsatCore) {
      auto t2 = Clock::now();
      auto cexs = collectCounterexamples(p_, original_, cfg_.scope, cfg_.cexCount, cfg_.solver,
                                         cfg_.seed);
      rep_.detectQueries += static_cast<uint64_t>(cexs.size()) + 1;
      std::vector<Input> inputs;
      for (auto& c : cexs) {
        inputs.push_back(c.input);
        if (pool_.add(p_, original_, c.input, cfg_.scope.intWidth))
          rep_.poolSizes.push_back(pool_.size());
      }
      SuspiciousReport sr =
          localize(p_, original_, inputs, cfg_.scope, cfg_.threshold, cfg_.solver, cfg_.seed);
      rep_.localization = sr;
      rep_.detectSeconds += secondsSince(t2);
      base = annotate(original_, sr, cfg_.perStatementBudget);
    }
    // Oracle mode trusts the mutGenLimit annotations already present.

    estimateSearchSpace(base);
    enqueue(std::move(base), 0, {});
  }

  void estimateSearchSpace(const Method& base) {
    auto lists = obtainMutants(p_, base, cfg_.operators);
    uint64_t b = 0;
    int totalBudget = 0;
    for (auto& [id, list] : lists) b += list.size();
    for (auto* s : base.allStatements()) totalBudget += s->mutGenLimit;
    uint64_t d = std::min<uint64_t>(static_cast<uint64_t>(cfg_.maxTotalDepth),
                                    static_cast<uint64_t>(totalBudget));
    if (b >= 2) {
      try {
        rep_.searchSpaceEstimate = estimateSpace(b, d);
      } catch (const std::overflow_error&) {
        rep_.searchSpaceEstimate = std::numeric_limits<uint64_t>::max();
      }
    }
  }

  void enqueue(Method m, int depth, std::vector<std::string> provenance) {
    uint64_t digest = mutantHash(m).digest;
    seen_.insert(digest);
    rep_.enqueued++;
    queue_.push_back(Queued{std::move(m), depth, digest, std::move(provenance)});
  }

  void driveQueue() {
    while (!queue_.empty()) {
      checkDeadline();
      Queued base = std::move(queue_.front());
      queue_.pop_front();
      if (iterateWhilePruning(base)) return;  // fixed
    }
    rep_.outcome = rep_.nonExhaustive ? RepairOutcome::NonExhaustive : RepairOutcome::NotFixable;
  }

  // One pass of the mutation-vector loop over a base method. Returns true
  // when a fix was accepted.
  bool iterateWhilePruning(const Queued& base) {
    const std::vector<int> order = base.method.mutableStatementIdsBottomUp();
    if (order.empty()) return false;
    auto lists = obtainMutants(p_, base.method, cfg_.operators);
    std::vector<int> arities;
    for (int id : order) arities.push_back(static_cast<int>(lists.at(id).size()));
    const int m = static_cast<int>(order.size());

    // Write-target forms in the base's coordinates, for feedback soundness.
    std::map<int, std::vector<UnrolledStmt::WriteForm>> forms;
    if (cfg_.pruning)
      for (int id : order)
        forms[id] = writeTargetForms(p_, base.method, *base.method.findStatement(id),
                                     cfg_.operators);

    StepLimits lims = StepLimits::forMethod(base.method, cfg_.scope);
    VectorIterator it(arities);
    while (it.hasNext()) {
      checkDeadline();
      MutationVector v = it.next();
      Method cand = applyVector(p_, base.method, lists, order, v);
      rep_.candidatesGenerated++;
      MutantId id = mutantHash(cand);
      bool dup = !seen_.insert(id.digest).second;
      if (cfg_.collectMutantDigests) rep_.mutantDigests.insert(id.digest);

      if (dup) {
        rep_.duplicates++;
        if (!cfg_.pruning) continue;
        // Even a duplicate's failure can justify a jump (the zero vector of a
        // freshly popped base, most importantly).
        SieveResult sr = sieve(p_, cand, pool_, lims, cfg_.scope.intWidth);
        if (sr.passed) continue;
        prune(it, base, cand, order, forms, v, *sr.witness, m);
        continue;
      }

      SieveResult sr = sieve(p_, cand, pool_, lims, cfg_.scope.intWidth);
      std::optional<Input> failing;
      if (!sr.passed) {
        rep_.sievedOut++;
        failing = sr.witness;
      } else {
        auto t = Clock::now();
        AcceptResult ar = accept(p_, cand, cfg_.scope, pool_, cfg_.solver, cfg_.seed);
        rep_.acceptQueries++;
        rep_.acceptSeconds += secondsSince(t);
        if (ar.accepted()) {
          rep_.accepted++;
          rep_.outcome = RepairOutcome::Fixed;
          rep_.fixedSource = prettyPrint(cand);
          rep_.provenance = base.provenance;
          rep_.provenance.push_back(v.str());
          return true;
        }
        rep_.verifierRejected++;
        if (ar.kind == AcceptResult::Kind::Unknown) {
          rep_.nonExhaustive = true;
        } else {
          failing = ar.cex->input;
          rep_.poolSizes.push_back(pool_.size());
        }
      }

      if (anyBudget(cand) && base.depth + 1 <= cfg_.maxTotalDepth) {
        auto prov = base.provenance;
        prov.push_back(v.str());
        enqueue(cand, base.depth + 1, std::move(prov));
      }

      if (cfg_.pruning && failing) {
        if (prune(it, base, cand, order, forms, v, *failing, m)) {
          // k == m: the remaining vectors of this base are abandoned
          break;
        }
      }
    }
    return false;
  }

  // Computes feedback for a failed candidate and jumps the iterator. Returns
  // true when the whole base is abandoned (k == m).
  bool prune(VectorIterator& it, const Queued& base, const Method& cand,
             const std::vector<int>& order,
             const std::map<int, std::vector<UnrolledStmt::WriteForm>>& forms,
             const MutationVector& v, const Input& failing, int m) {
    auto t = Clock::now();
    Feedback fb = getFeedback(p_, cand, order, forms, failing, cfg_.scope, cfg_.solver, cfg_.seed);
    rep_.feedbackQueries += fb.trail.size();
    rep_.feedbackSeconds += secondsSince(t);
    if (fb.sawUnknown) rep_.nonExhaustive = true;

    RepairReport::FeedbackEvent ev;
    ev.baseVector = v.str();
    ev.k = fb.k;
    ev.levels = fb.trail;
    if (fb.k == 0) {
      rep_.feedbackTrail.push_back(std::move(ev));
      return false;
    }
    if (fb.k >= m) {
      // No assignment to all mutable statements completes this input: the
      // remaining vectors of this base cannot help it.
      uint64_t total = VectorIterator::totalCount(it.arities());
      uint64_t next = VectorIterator::rank(v, it.arities()) + 1;
      ev.skipped = total > next ? total - next : 0;
      ev.abandonedBase = true;
      rep_.prunedSkipped += ev.skipped;
      rep_.feedbackTrail.push_back(std::move(ev));
      return true;
    }
    // jump target: zero positions 0..k-1, then carry-add at position k
    MutationVector target = v;
    for (int i = 0; i < fb.k; i++) target.j[static_cast<size_t>(i)] = 0;
    size_t ci = static_cast<size_t>(fb.k);
    bool overflow = true;
    for (; ci < target.j.size(); ci++) {
      if (target.j[ci] < it.arities()[ci]) {
        target.j[ci]++;
        overflow = false;
        break;
      }
      target.j[ci] = 0;
    }
    uint64_t next = VectorIterator::rank(v, it.arities()) + 1;
    uint64_t targetRank =
        overflow ? VectorIterator::totalCount(it.arities()) : VectorIterator::rank(target, it.arities());
    ev.skipped = targetRank > next ? targetRank - next : 0;
    rep_.prunedSkipped += ev.skipped;
    rep_.feedbackTrail.push_back(std::move(ev));

    it.setToZeroAllPositionsInRange(0, fb.k - 1);
    it.advanceOneStartingAtIndex(fb.k);
    return false;
  }

  const Program& p_;
  const Method& original_;
  const RepairConfig& cfg_;
  RepairReport rep_;
  Clock::time_point t0_;
  InputPool pool_;
  std::deque<Queued> queue_;
  std::set<uint64_t> seen_;
};

}  // namespace

RepairReport repair(const Program& p, const std::string& methodName, const RepairConfig& cfg) {
  const Method* m = p.findMethod(methodName);
  if (!m) throw std::invalid_argument("no such method: " + methodName);
  cfg.scope.validate();
  RepairRun run(p, *m, cfg);
  return run.run();
}

std::string repairReportJson(const RepairReport& r) {
  nlohmann::json j;
  j["method"] = r.methodName;
  j["outcome"] = repairOutcomeName(r.outcome);
  j["alreadyCorrect"] = r.alreadyCorrect;
  if (!r.fixedSource.empty()) j["fix"] = r.fixedSource;
  j["provenance"] = r.provenance;
  j["counters"] = {
      {"generated", r.candidatesGenerated},
      {"duplicates", r.duplicates},
      {"sievedOut", r.sievedOut},
      {"verifierRejected", r.verifierRejected},
      {"accepted", r.accepted},
      {"enqueued", r.enqueued},
      {"prunedSkipped", r.prunedSkipped},
  };
  j["sat"] = {
      {"detectQueries", r.detectQueries},   {"acceptQueries", r.acceptQueries},
      {"feedbackQueries", r.feedbackQueries}, {"detectSeconds", r.detectSeconds},
      {"acceptSeconds", r.acceptSeconds},   {"feedbackSeconds", r.feedbackSeconds},
  };
  j["poolSizes"] = r.poolSizes;
  nlohmann::json trail = nlohmann::json::array();
  for (auto& ev : r.feedbackTrail) {
    nlohmann::json e;
    e["vector"] = ev.baseVector;
    e["k"] = ev.k;
    e["skipped"] = ev.skipped;
    e["abandonedBase"] = ev.abandonedBase;
    nlohmann::json lv = nlohmann::json::array();
    for (auto& l : ev.levels)
      lv.push_back({{"level", l.level},
                    {"stmt", l.stmtId},
                    {"verdict", l.verdict == VerdictKind::Unsat
                                    ? "unsat"
                                    : (l.verdict == VerdictKind::Sat ? "sat" : "unknown")}});
    e["levels"] = lv;
    trail.push_back(e);
  }
  j["feedback"] = trail;
  j["nonExhaustive"] = r.nonExhaustive;
  j["seconds"] = r.seconds;
  j["searchSpaceEstimate"] = r.searchSpaceEstimate;
  if (r.localization) j["localization"] = nlohmann::json::parse(suspiciousReportJson(*r.localization));
  return j.dump(2);
}

}  // namespace stitch
