#include "test_util.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "stitch/corpus.hpp"
#include "stitch/interp.hpp"
#include "stitch/mutate.hpp"
#include "stitch/mutation_vector.hpp"
#include "stitch/parse.hpp"
#include "stitch/typecheck.hpp"

namespace stitch::test {

namespace {

enum : int8_t { kU = 0, kT = 1, kF = -1 };

bool dpllRec(const std::vector<std::vector<Lit>>& clauses, std::vector<int8_t>& assign) {
  // Unit propagation to fixpoint.
  std::vector<std::pair<Var, int8_t>> trail;
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& c : clauses) {
      int unassigned = 0;
      Lit unit{};
      bool sat = false;
      for (Lit l : c) {
        int8_t v = assign[l.var()];
        if (v == kU) {
          unassigned++;
          unit = l;
        } else if ((v == kT) != l.sign()) {
          // literal true
          sat = true;
          break;
        }
      }
      if (sat) continue;
      if (unassigned == 0) {
        for (auto& [var, old] : trail) assign[var] = old;
        return false;
      }
      if (unassigned == 1) {
        trail.push_back({unit.var(), assign[unit.var()]});
        assign[unit.var()] = unit.sign() ? kF : kT;
        changed = true;
      }
    }
  }
  Var pick = -1;
  for (Var v = 0; v < static_cast<Var>(assign.size()); v++)
    if (assign[v] == kU) {
      pick = v;
      break;
    }
  if (pick < 0) return true;
  trail.push_back({pick, kU});
  assign[pick] = kT;
  if (dpllRec(clauses, assign)) return true;
  assign[pick] = kF;
  if (dpllRec(clauses, assign)) return true;
  for (auto& [var, old] : trail) assign[var] = old;
  return false;
}

}  // namespace

bool dpllSat(const Cnf& f) {
  for (auto& c : f.clauses)
    if (c.empty()) return false;
  std::vector<int8_t> assign(static_cast<size_t>(f.numVars), kU);
  return dpllRec(f.clauses, assign);
}

Cnf randomCnf(std::mt19937_64& rng, int vars, int clauses) {
  Cnf f;
  f.numVars = vars;
  std::uniform_int_distribution<int> varD(0, vars - 1);
  std::uniform_int_distribution<int> signD(0, 1);
  for (int i = 0; i < clauses; i++) {
    std::vector<Lit> c;
    while (c.size() < 3) {
      Lit l = Lit::make(varD(rng), signD(rng) == 1);
      bool dup = false;
      for (Lit o : c)
        if (o.var() == l.var()) dup = true;
      if (!dup) c.push_back(l);
    }
    f.add(std::move(c));
  }
  return f;
}

std::string readCorpusFile(const std::string& name) {
  std::string path = std::string(STITCH_CORPUS_DIR) + "/" + name;
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Program loadCorpusProgram(const std::string& name) { return corpusProgram(name); }

Input randomInput(std::mt19937_64& rng, const Program& p, const Method& m, const Scope& s) {
  Input in;
  in.heap = ConcreteHeap::empty(p, s.objectsPerRecord, s.intWidth);
  std::uniform_int_distribution<int> liveD(0, s.objectsPerRecord);
  const int64_t lo = -(1ll << (s.intWidth - 1));
  const int64_t hi = (1ll << (s.intWidth - 1)) - 1;
  std::uniform_int_distribution<int64_t> intD(lo, hi);
  std::uniform_int_distribution<int> boolD(0, 1);

  std::map<std::string, int> liveCount;
  for (auto& r : p.records) liveCount[r.name] = liveD(rng);

  auto randomValue = [&](const Type& t) -> Value {
    if (t.isInt()) return Value::intV(intD(rng));
    if (t.isBool()) return Value::boolV(boolD(rng) == 1);
    int live = liveCount.count(t.record) ? liveCount[t.record] : 0;
    std::uniform_int_distribution<int> refD(0, live);  // 0 = null
    return Value::refV(refD(rng));
  };

  for (auto& r : p.records) {
    auto& slots = in.heap.objects[r.name];
    for (int i = 0; i < liveCount[r.name]; i++) {
      slots[static_cast<size_t>(i)].live = true;
      for (auto& f : r.fields) slots[static_cast<size_t>(i)].fields[f.name] = randomValue(f.type);
    }
  }
  if (m.receiver) {
    int live = liveCount[m.receiver->type.record];
    if (live == 0) {
      in.receiver = Value::nullV();
    } else {
      std::uniform_int_distribution<int> recvD(1, live);
      in.receiver = Value::refV(recvD(rng));
    }
  }
  for (auto& param : m.params) in.args.push_back(randomValue(param.type));
  return in;
}

std::optional<Input> randomValidInput(std::mt19937_64& rng, const Program& p, const Method& m,
                                      const Scope& s, int maxTries) {
  for (int i = 0; i < maxTries; i++) {
    Input in = randomInput(rng, p, m, s);
    if (satisfiesPre(p, m, in, s.intWidth)) return in;
  }
  return std::nullopt;
}

PruneSoundnessReport pruneSoundnessOracle(const Program& p, const Method& m, const Input& input,
                                          int k, const Scope& s) {
  PruneSoundnessReport rep;
  auto order = m.mutableStatementIdsBottomUp();
  if (k < 1 || k > static_cast<int>(order.size()))
    throw std::runtime_error("pruneSoundnessOracle: bad k");
  auto lists = obtainMutants(p, m, OperatorSet::all());
  std::vector<int> arities;
  for (int i = 0; i < k; i++) arities.push_back(static_cast<int>(lists.at(order[static_cast<size_t>(i)]).size()));
  StepLimits lim = StepLimits::forMethod(m, s);
  VectorIterator it(arities);
  while (it.hasNext()) {
    MutationVector sub = it.next();
    MutationVector full;
    full.j = sub.j;
    full.j.resize(order.size(), 0);
    Method cand = applyVector(p, m, lists, order, full);
    ExecResult r = execute(p, cand, input, lim, s.intWidth);
    rep.combosTried++;
    if (r.outcome == RunOutcome::PassedContract) rep.passing++;
  }
  return rep;
}

namespace {

void closure(const Program& p, const Method& m, int stmtId, int budget,
             std::vector<Statement>& out) {
  // all statement variants reachable with <= budget single mutations
  std::set<std::string> seenKeys;
  std::vector<Statement> frontier{*m.findStatement(stmtId)};
  seenKeys.insert(canonicalKey(frontier[0]));
  out.push_back(frontier[0]);
  for (int depth = 0; depth < budget; depth++) {
    std::vector<Statement> next;
    for (auto& s : frontier) {
      Method probe = m;
      Statement withId = s;
      withId.id = stmtId;
      *probe.findStatement(stmtId) = withId;
      typecheckMethod(p, probe);
      for (auto& mu : statementMutations(p, probe, *probe.findStatement(stmtId),
                                         OperatorSet::all())) {
        Statement r = mu.replacement;
        r.id = stmtId;
        if (seenKeys.insert(canonicalKey(r)).second) {
          next.push_back(r);
          out.push_back(r);
        }
      }
    }
    frontier = std::move(next);
  }
}

}  // namespace

std::set<uint64_t> bruteForceMutantDigests(const Program& p, const Method& m) {
  auto order = m.mutableStatementIdsBottomUp();
  std::vector<std::vector<Statement>> variants;
  for (int id : order) {
    std::vector<Statement> v;
    closure(p, m, id, m.findStatement(id)->mutGenLimit, v);
    variants.push_back(std::move(v));
  }
  std::set<uint64_t> out;
  std::vector<size_t> idx(variants.size(), 0);
  while (true) {
    Method cand = m;
    for (size_t i = 0; i < order.size(); i++) {
      Statement s = variants[i][idx[i]];
      s.mutGenLimit = 0;  // digests ignore budgets anyway
      s.id = order[i];
      *cand.findStatement(order[i]) = std::move(s);
    }
    out.insert(mutantHash(cand).digest);
    size_t i = 0;
    while (i < idx.size()) {
      if (++idx[i] < variants[i].size()) break;
      idx[i] = 0;
      i++;
    }
    if (i == idx.size()) break;
  }
  return out;
}

}  // namespace stitch::test
