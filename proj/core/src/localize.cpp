#include "stitch/localize.hpp"

#include <cmath>
#include <set>

#include <nlohmann/json.hpp>

#include "stitch/diagnostics.hpp"

namespace stitch {

std::string suspiciousReportJson(const SuspiciousReport& r) {
  nlohmann::json j;
  j["cores"] = r.coreCount;
  nlohmann::json hits = nlohmann::json::array();
  for (auto& [id, n] : r.hitCounts) {
    nlohmann::json h;
    h["stmt"] = id;
    h["hits"] = n;
    auto it = r.spans.find(id);
    if (it != r.spans.end()) {
      h["line"] = it->second.line;
      h["col"] = it->second.col;
    }
    hits.push_back(h);
  }
  j["hits"] = hits;
  j["selected"] = r.selected;
  return j.dump(2);
}

std::vector<Counterexample> collectCounterexamples(const Program& p, const Method& m,
                                                   const Scope& s, int count,
                                                   const SolveLimits& limits, uint64_t seed) {
  std::vector<Counterexample> out;
  Encoding e = encodeCorrectness(p, m, s);
  for (int i = 0; i < count; i++) {
    Verdict v = solve(e.cnf, {}, limits, seed);
    if (!v.sat()) break;  // no further distinct failing inputs (or budget hit)
    DecodedCex d = decodeModel(p, e, v.model);
    out.push_back(Counterexample{d.input, d.replay});
    blockInput(e, d.input);
  }
  return out;
}

SuspiciousReport localize(const Program& p, const Method& m, const std::vector<Input>& cexs,
                          const Scope& s, double threshold, const SolveLimits& limits,
                          uint64_t seed) {
  SuspiciousReport rep;
  for (const Input& in : cexs) {
    Encoding e = encodeTraceRefutation(p, m, in, s);  // throws unless it violates
    Verdict v = solve(e.cnf, {}, limits, seed);
    if (v.unknown()) continue;  // budget: skip this input's core
    if (!v.unsat())
      throw InternalError("trace refutation solved Sat; encoder broken");
    auto core = minimizeCore(e.cnf, v.core, 256, limits, seed);
    std::set<int> stmts;
    for (GroupId g : core) {
      const GroupKey& k = e.groupKeys[static_cast<size_t>(g)];
      if (k.kind == ConjunctKind::Code) stmts.insert(k.stmtId);
    }
    rep.coreCount++;
    for (int id : stmts) rep.hitCounts[id]++;
  }
  int need = std::max(1, static_cast<int>(std::ceil(threshold * rep.coreCount)));
  for (auto& [id, n] : rep.hitCounts) {
    if (rep.coreCount > 0 && n >= need) rep.selected.push_back(id);
    auto it = m.spans.find(id);
    if (it != m.spans.end()) rep.spans[id] = it->second;
  }
  return rep;
}

Method annotate(const Method& m, const SuspiciousReport& r, int perStatementBudget) {
  Method out = m;
  std::set<int> sel(r.selected.begin(), r.selected.end());
  for (Statement* s : out.allStatements()) s->mutGenLimit = sel.count(s->id) ? perStatementBudget : 0;
  return out;
}

}  // namespace stitch
