#include "stitch/verify.hpp"

namespace stitch {

DetectResult detect(const Program& p, const Method& m, const Scope& s, const SolveLimits& limits,
                    uint64_t seed) {
  DetectResult out;
  Encoding e = encodeCorrectness(p, m, s);
  Verdict v = solve(e.cnf, {}, limits, seed, &out.stats);
  if (v.unknown()) {
    out.kind = DetectResult::Kind::Unknown;
    return out;
  }
  if (v.sat()) {
    DecodedCex d = decodeModel(p, e, v.model);
    out.kind = DetectResult::Kind::Faulty;
    out.cex = Counterexample{d.input, d.replay};
    return out;
  }
  out.kind = DetectResult::Kind::Correct;
  // Distinguish genuine correctness from an empty pre-state space.
  auto pre = e.groupsOfKind(ConjunctKind::Requires);
  auto inv = e.groupsOfKind(ConjunctKind::InvariantPre);
  pre.insert(pre.end(), inv.begin(), inv.end());
  Verdict anyPre = solveWithGroups(e.cnf, pre, {}, limits, seed);
  out.vacuous = anyPre.unsat();
  return out;
}

AcceptResult accept(const Program& p, const Method& candidate, const Scope& s, InputPool& pool,
                    const SolveLimits& limits, uint64_t seed) {
  AcceptResult out;
  DetectResult d = detect(p, candidate, s, limits, seed);
  out.stats = d.stats;
  switch (d.kind) {
    case DetectResult::Kind::Correct: out.kind = AcceptResult::Kind::Accepted; break;
    case DetectResult::Kind::Faulty:
      out.kind = AcceptResult::Kind::Rejected;
      out.cex = d.cex;
      pool.add(p, candidate, d.cex->input, s.intWidth);
      break;
    case DetectResult::Kind::Unknown: out.kind = AcceptResult::Kind::Unknown; break;
  }
  return out;
}

}  // namespace stitch
