#include "stitch/prune.hpp"

#include <set>

#include "stitch/diagnostics.hpp"

namespace stitch {

namespace {

Type formValueType(const Program& p, const Method& m, const UnrolledStmt::WriteForm& f) {
  if (f.isField) {
    const RecordDecl* rd = p.findRecord(f.record);
    return rd->findField(f.field)->type;
  }
  if (m.receiver && m.receiver->name == f.var) return m.receiver->type;
  for (auto& par : m.params)
    if (par.name == f.var) return par.type;
  for (auto& l : m.locals)
    if (l.name == f.var) return l.type;
  throw InternalError("write form names an unknown variable: " + f.var);
}

}  // namespace

VariabilizedMethod variabilize(const Program& p, const Method& m,
                               const std::vector<int>& mutableIdsBottomUp,
                               const std::map<int, std::vector<UnrolledStmt::WriteForm>>& formsById,
                               const Input& failing, int level, const Scope& s) {
  if (level < 1 || level > static_cast<int>(mutableIdsBottomUp.size()))
    throw InternalError("variabilization level out of range");
  {
    ExecResult replay = execute(p, m, failing, StepLimits::forMethod(m, s), s.intWidth);
    if (!isViolation(replay.outcome))
      throw InternalError("variabilize: the pinned input does not violate the contract");
  }
  VariabilizedMethod vm;
  vm.method = m;
  vm.pinned = failing;
  vm.level = level;
  vm.mutableIds = mutableIdsBottomUp;
  vm.body = unroll(m, s);
  vm.body.origin = nullptr;  // decoupled from the transient method reference

  std::set<int> targets(mutableIdsBottomUp.begin(), mutableIdsBottomUp.begin() + level);
  for (UnrolledStmt* u : allUnrolled(vm.body)) {
    if (!targets.count(u->originId)) continue;
    const std::string suffix =
        "#" + std::to_string(u->originId) + "r" + std::to_string(u->replica);
    switch (u->kind) {
      case UnrolledStmt::Kind::Assign:
      case UnrolledStmt::Kind::FieldAssign: {
        auto it = formsById.find(u->originId);
        if (it == formsById.end() || it->second.empty())
          throw InternalError("no write forms for variabilized statement");
        std::vector<UnrolledStmt::WriteForm> forms = it->second;
        if (forms.size() == 1 && !forms[0].isField) {
          // plain x = Var
          int val = vm.ledger.add("Var" + suffix, formValueType(p, m, forms[0]));
          Expr fresh = Expr::fresh(val, formValueType(p, m, forms[0]));
          UnrolledStmt repl;
          repl.kind = UnrolledStmt::Kind::Assign;
          repl.originId = u->originId;
          repl.replica = u->replica;
          repl.var = forms[0].var;
          repl.value = fresh;
          *u = std::move(repl);
          break;
        }
        // general write abstraction: selector over target forms
        UnrolledStmt repl;
        repl.kind = UnrolledStmt::Kind::AbstractWrite;
        repl.originId = u->originId;
        repl.replica = u->replica;
        int width = bitsForRange(static_cast<int64_t>(forms.size()) - 1);
        repl.selectorLedger = vm.ledger.add("Sel" + suffix, Type::intType(), width,
                                            static_cast<int64_t>(forms.size()) - 1);
        for (auto f : forms) {
          f.valueLedger = vm.ledger.add("Val" + suffix, formValueType(p, m, f));
          if (f.isField)
            f.navLedger = vm.ledger.add("LHSVar" + suffix, Type::refType(f.record));
          repl.forms.push_back(f);
        }
        *u = std::move(repl);
        break;
      }
      case UnrolledStmt::Kind::If:
      case UnrolledStmt::Kind::ScopeCheck: {
        int idx = vm.ledger.add("Guard" + suffix, Type::boolType());
        u->cond = Expr::fresh(idx, Type::boolType());
        break;
      }
      case UnrolledStmt::Kind::Return: {
        if (u->hasValue) {
          int idx = vm.ledger.add("Ret" + suffix, m.returnType);
          u->value = Expr::fresh(idx, m.returnType);
        }
        break;
      }
      case UnrolledStmt::Kind::New:
      case UnrolledStmt::Kind::Skip:
        break;  // no applicable mutations; the statement stays as-is
      case UnrolledStmt::Kind::AbstractWrite:
        throw InternalError("variabilize applied twice");
    }
  }
  return vm;
}

VariabilizedMethod variabilize(const Program& p, const Method& m, const Input& failing, int level,
                               const Scope& s, const OperatorSet& ops) {
  std::vector<int> ids = m.mutableStatementIdsBottomUp();
  std::map<int, std::vector<UnrolledStmt::WriteForm>> forms;
  for (int id : ids) forms[id] = writeTargetForms(p, m, *m.findStatement(id), ops);
  return variabilize(p, m, ids, forms, failing, level, s);
}

Encoding encodeVariabilized(const Program& p, const VariabilizedMethod& vm, const Scope& s) {
  EncodeOptions opts;
  opts.goal = EncodeOptions::Goal::FindPassing;
  opts.pin = &vm.pinned;
  opts.assertContractPre = false;  // the pinned input already satisfied pre
  opts.ledger = &vm.ledger;
  return encodeRun(p, vm.method, vm.body, s, opts);
}

Feedback getFeedback(const Program& p, const Method& m,
                     const std::vector<int>& mutableIdsBottomUp,
                     const std::map<int, std::vector<UnrolledStmt::WriteForm>>& formsById,
                     const Input& failing, const Scope& s, const SolveLimits& limits,
                     uint64_t seed) {
  Feedback fb;
  const int mcount = static_cast<int>(mutableIdsBottomUp.size());
  for (int k = 1; k <= mcount; k++) {
    VariabilizedMethod vm = variabilize(p, m, mutableIdsBottomUp, formsById, failing, k, s);
    Encoding e = encodeVariabilized(p, vm, s);
    Verdict v = solve(e.cnf, {}, limits, seed);
    fb.trail.push_back(Feedback::Level{k, mutableIdsBottomUp[static_cast<size_t>(k - 1)], v.kind});
    if (v.unsat()) {
      fb.k = k;
      continue;
    }
    if (v.unknown()) fb.sawUnknown = true;  // conservative: stop as if Sat
    break;
  }
  return fb;
}

Feedback getFeedback(const Program& p, const Method& m, const Input& failing, const Scope& s,
                     const OperatorSet& ops, const SolveLimits& limits, uint64_t seed) {
  std::vector<int> ids = m.mutableStatementIdsBottomUp();
  std::map<int, std::vector<UnrolledStmt::WriteForm>> forms;
  for (int id : ids) forms[id] = writeTargetForms(p, m, *m.findStatement(id), ops);
  return getFeedback(p, m, ids, forms, failing, s, limits, seed);
}

}  // namespace stitch
