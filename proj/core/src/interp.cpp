#include "stitch/interp.hpp"

#include <stdexcept>

#include "stitch/diagnostics.hpp"

namespace stitch {

int64_t wrapToWidth(int64_t x, int width) {
  const uint64_t mask = (width >= 64) ? ~0ull : ((1ull << width) - 1);
  uint64_t u = static_cast<uint64_t>(x) & mask;
  const uint64_t sign = 1ull << (width - 1);
  if (u & sign) return static_cast<int64_t>(u | ~mask);
  return static_cast<int64_t>(u);
}

ConcreteHeap ConcreteHeap::empty(const Program& p, int slotsPerRecord, int /*intWidth*/) {
  ConcreteHeap h;
  for (auto& r : p.records) {
    std::vector<HeapSlot> slots(static_cast<size_t>(slotsPerRecord));
    for (auto& s : slots)
      for (auto& f : r.fields) s.fields[f.name] = defaultValue(f.type);
    h.objects[r.name] = std::move(slots);
  }
  return h;
}

int ConcreteHeap::slotCount(const std::string& record) const {
  auto it = objects.find(record);
  return it == objects.end() ? 0 : static_cast<int>(it->second.size());
}

int ConcreteHeap::liveCount(const std::string& record) const {
  auto it = objects.find(record);
  if (it == objects.end()) return 0;
  int n = 0;
  for (auto& s : it->second)
    if (s.live) n++;
  return n;
}

int ConcreteHeap::lowestDeadSlot(const std::string& record) const {
  auto it = objects.find(record);
  if (it == objects.end()) return -1;
  for (size_t i = 0; i < it->second.size(); i++)
    if (!it->second[i].live) return static_cast<int>(i);
  return -1;
}

Value defaultValue(const Type& t) {
  switch (t.kind) {
    case TypeKind::Int: return Value::intV(0);
    case TypeKind::Bool: return Value::boolV(false);
    case TypeKind::Ref: return Value::nullV();
    case TypeKind::Void: break;
  }
  return Value::intV(0);
}

bool Input::operator==(const Input& o) const {
  if (!(receiver == o.receiver) || args != o.args) return false;
  if (heap.objects.size() != o.heap.objects.size()) return false;
  for (auto& [rec, slots] : heap.objects) {
    auto it = o.heap.objects.find(rec);
    if (it == o.heap.objects.end() || it->second.size() != slots.size()) return false;
    for (size_t i = 0; i < slots.size(); i++) {
      if (slots[i].live != it->second[i].live) return false;
      if (slots[i].fields != it->second[i].fields) return false;
    }
  }
  return true;
}

const char* runOutcomeName(RunOutcome o) {
  switch (o) {
    case RunOutcome::PassedContract: return "PassedContract";
    case RunOutcome::ViolatedPost: return "ViolatedPost";
    case RunOutcome::ViolatedInvariant: return "ViolatedInvariant";
    case RunOutcome::NullDeref: return "NullDeref";
    case RunOutcome::DivByZero: return "DivByZero";
    case RunOutcome::ScopeExceededLoop: return "ScopeExceededLoop";
    case RunOutcome::ScopeExceededHeap: return "ScopeExceededHeap";
    case RunOutcome::StepLimit: return "StepLimit";
    case RunOutcome::PreViolated: return "PreViolated";
  }
  return "?";
}

bool isViolation(RunOutcome o) {
  return o == RunOutcome::ViolatedPost || o == RunOutcome::ViolatedInvariant ||
         o == RunOutcome::NullDeref || o == RunOutcome::DivByZero;
}

bool isOutOfScope(RunOutcome o) {
  return o == RunOutcome::ScopeExceededLoop || o == RunOutcome::ScopeExceededHeap ||
         o == RunOutcome::StepLimit;
}

StepLimits StepLimits::forMethod(const Method& m, const Scope& s) {
  StepLimits l;
  l.unrollBound = s.unrollBound;
  int64_t stmts = static_cast<int64_t>(m.allStatements().size());
  l.maxSteps = std::max<int64_t>(16, s.unrollBound * stmts * 4);
  return l;
}

namespace {

struct Trap {
  RunOutcome kind;
};

struct Env {
  std::map<std::string, Value> vars;
};

class Interp {
 public:
  Interp(const Program& p, const Method& m, const StepLimits& lim, int width)
      : prog_(p), m_(m), lim_(lim), width_(width) {
    if (lim_.maxSteps == 0) {
      StepLimits d = lim_;
      d.maxSteps = std::max<int64_t>(16, lim_.unrollBound *
                                             static_cast<int64_t>(m.allStatements().size()) * 4);
      lim_ = d;
    }
  }

  ExecResult run(const Input& in) {
    ExecResult r;
    heap_ = in.heap;
    env_ = bindParams(in);
    oldHeap_ = in.heap;
    oldEnv_ = env_;
    // Defensive entry check; pool insertion already guarantees it.
    if (!evalContractBool(m_.contract.requiresClause, /*old=*/false) ||
        !evalContractBool(m_.contract.invariantClause, /*old=*/false) || receiverNull(in)) {
      r.outcome = RunOutcome::PreViolated;
      r.finalHeap = heap_;
      r.trace = trace_;
      return r;
    }
    try {
      bool returned = execBlock(m_.body);
      r.returned = returned;
      if (returned) r.result = result_;
      // Exit checks; \old refers to the snapshots.
      if (!evalContractBool(m_.contract.invariantClause, false)) {
        r.outcome = RunOutcome::ViolatedInvariant;
      } else if (!evalContractBool(m_.contract.ensuresClause, false)) {
        r.outcome = RunOutcome::ViolatedPost;
      } else {
        r.outcome = RunOutcome::PassedContract;
      }
    } catch (const Trap& t) {
      r.outcome = t.kind;
    }
    r.finalHeap = heap_;
    r.trace = trace_;
    return r;
  }

  bool checkPre(const Input& in) {
    heap_ = in.heap;
    env_ = bindParams(in);
    oldHeap_ = heap_;
    oldEnv_ = env_;
    if (receiverNull(in)) return false;
    return evalContractBool(m_.contract.requiresClause, false) &&
           evalContractBool(m_.contract.invariantClause, false);
  }

 private:
  bool receiverNull(const Input& in) const { return m_.receiver && in.receiver.isNullRef(); }

  Env bindParams(const Input& in) const {
    Env e;
    if (m_.receiver) e.vars["this"] = in.receiver;
    if (in.args.size() != m_.params.size())
      throw InternalError("argument count mismatch for method " + m_.name);
    for (size_t i = 0; i < m_.params.size(); i++) e.vars[m_.params[i].name] = in.args[i];
    for (auto& l : m_.locals) e.vars[l.name] = defaultValue(l.type);
    return e;
  }

  // Contract evaluation: traps count as "does not hold".
  bool evalContractBool(const Expr& e, bool inOld) {
    try {
      return evalIn(e, inOld).v != 0;
    } catch (const Trap&) {
      return false;
    }
  }

  void step(const Statement& s) {
    if (++steps_ > lim_.maxSteps) throw Trap{RunOutcome::StepLimit};
    int& n = dynCount_[s.id];
    trace_.push_back(TraceStep{s.id, n});
    n++;
  }

  // Returns true when a Return executed.
  bool execBlock(const std::vector<Statement>& b) {
    for (auto& s : b)
      if (execStmt(s)) return true;
    return false;
  }

  bool execStmt(const Statement& s) {
    step(s);
    switch (s.kind) {
      case StmtKind::VarAssign: {
        env_.vars[s.var] = eval(s.value);
        return false;
      }
      case StmtKind::FieldAssign: {
        Value base = eval(s.lhsBase);
        if (base.isNullRef()) throw Trap{RunOutcome::NullDeref};
        const std::string rec = navRecord(s.lhsBase);
        heap_.objects[rec][static_cast<size_t>(base.v - 1)].fields[s.field] = eval(s.value);
        return false;
      }
      case StmtKind::If: {
        Value c = eval(s.cond);
        return c.v != 0 ? execBlock(s.thenBlock) : execBlock(s.elseBlock);
      }
      case StmtKind::While: {
        int iters = 0;
        while (true) {
          Value c = eval(s.cond);
          if (c.v == 0) return false;
          if (iters >= lim_.unrollBound) throw Trap{RunOutcome::ScopeExceededLoop};
          iters++;
          if (execBlock(s.body)) return true;
          // re-entering the guard counts toward this entry's iteration budget
        }
      }
      case StmtKind::Return: {
        if (s.hasValue) result_ = eval(s.value);
        return true;
      }
      case StmtKind::New: {
        int slot = heap_.lowestDeadSlot(s.recordName);
        if (slot < 0) throw Trap{RunOutcome::ScopeExceededHeap};
        auto& hs = heap_.objects[s.recordName][static_cast<size_t>(slot)];
        hs.live = true;
        const RecordDecl* rd = prog_.findRecord(s.recordName);
        for (auto& f : rd->fields) hs.fields[f.name] = defaultValue(f.type);
        env_.vars[s.var] = Value::refV(slot + 1);
        return false;
      }
      case StmtKind::Skip: return false;
    }
    return false;
  }

  // Record type that `e` (the navigation up to the written field) evaluates
  // into; set by the typechecker.
  static const std::string& navRecord(const Expr& e) { return e.type.record; }

  Value eval(const Expr& e) { return evalIn(e, false); }

  Value evalIn(const Expr& e, bool inOld) {
    const Env& env = inOld ? oldEnv_ : env_;
    const ConcreteHeap& heap = inOld ? oldHeap_ : heap_;
    switch (e.kind) {
      case ExprKind::IntLit: return Value::intV(wrapToWidth(e.intVal, width_));
      case ExprKind::BoolLit: return Value::boolV(e.intVal != 0);
      case ExprKind::Null: return Value::nullV();
      case ExprKind::Var: {
        auto it = env.vars.find(e.name);
        if (it == env.vars.end()) throw InternalError("unbound variable " + e.name);
        return it->second;
      }
      case ExprKind::Nav: {
        auto it = env.vars.find(e.name);
        if (it == env.vars.end()) throw InternalError("unbound variable " + e.name);
        Value cur = it->second;
        std::string rec = varRecord(e.name);
        for (auto& f : e.fields) {
          if (cur.isNullRef()) throw Trap{RunOutcome::NullDeref};
          const HeapSlot& slot = heap.objects.at(rec)[static_cast<size_t>(cur.v - 1)];
          cur = slot.fields.at(f);
          const Param* fp = prog_.findRecord(rec)->findField(f);
          rec = fp->type.isRef() ? fp->type.record : "";
        }
        return cur;
      }
      case ExprKind::Unary: {
        if (e.uop == UnOp::Not) {
          Value k = evalIn(e.kids[0], inOld);
          return Value::boolV(k.v == 0);
        }
        Value k = evalIn(e.kids[0], inOld);
        return Value::intV(wrapToWidth(-k.v, width_));
      }
      case ExprKind::Binary: return evalBinary(e, inOld);
      case ExprKind::Old: return evalIn(e.kids[0], true);
      case ExprKind::Result: return result_;
      case ExprKind::Reach: return evalReach(e, inOld);
      case ExprKind::FreshRef:
        throw InternalError("fresh variabilization reference reached the interpreter");
    }
    throw InternalError("malformed expression");
  }

  Value evalBinary(const Expr& e, bool inOld) {
    const BinOp op = e.bop;
    // Short-circuit connectors first; they guard traps on the right.
    if (op == BinOp::And) {
      Value l = evalIn(e.kids[0], inOld);
      if (l.v == 0) return Value::boolV(false);
      return Value::boolV(evalIn(e.kids[1], inOld).v != 0);
    }
    if (op == BinOp::Or) {
      Value l = evalIn(e.kids[0], inOld);
      if (l.v != 0) return Value::boolV(true);
      return Value::boolV(evalIn(e.kids[1], inOld).v != 0);
    }
    Value l = evalIn(e.kids[0], inOld);
    Value r = evalIn(e.kids[1], inOld);
    switch (op) {
      case BinOp::Xor: return Value::boolV((l.v != 0) != (r.v != 0));
      case BinOp::Add: return Value::intV(wrapToWidth(l.v + r.v, width_));
      case BinOp::Sub: return Value::intV(wrapToWidth(l.v - r.v, width_));
      case BinOp::Mul: return Value::intV(wrapToWidth(l.v * r.v, width_));
      case BinOp::Div: {
        if (r.v == 0) throw Trap{RunOutcome::DivByZero};
        return Value::intV(wrapToWidth(l.v / r.v, width_));  // int64 never overflows at w<=16
      }
      case BinOp::Mod: {
        if (r.v == 0) throw Trap{RunOutcome::DivByZero};
        return Value::intV(wrapToWidth(l.v % r.v, width_));
      }
      case BinOp::Lt: return Value::boolV(l.v < r.v);
      case BinOp::Le: return Value::boolV(l.v <= r.v);
      case BinOp::Gt: return Value::boolV(l.v > r.v);
      case BinOp::Ge: return Value::boolV(l.v >= r.v);
      case BinOp::Eq: return Value::boolV(l.v == r.v);
      case BinOp::Ne: return Value::boolV(l.v != r.v);
      default: throw InternalError("unexpected operator");
    }
  }

  // y reachable from x via zero or more f steps. The walk is total: it stops
  // at null or on slot revisit. null is reachable iff the chain terminates.
  Value evalReach(const Expr& e, bool inOld) {
    const ConcreteHeap& heap = inOld ? oldHeap_ : heap_;
    Value x = evalIn(e.kids[0], inOld);
    Value y = evalIn(e.kids[1], inOld);
    const std::string rec = e.kids[0].type.record;
    std::set<int64_t> visited;
    bool nullReached = false;
    Value cur = x;
    while (true) {
      if (cur.isNullRef()) {
        nullReached = true;
        break;
      }
      if (!visited.insert(cur.v).second) break;
      cur = heap.objects.at(rec)[static_cast<size_t>(cur.v - 1)].fields.at(e.name);
    }
    if (y.isNullRef()) return Value::boolV(nullReached);
    return Value::boolV(visited.count(y.v) > 0);
  }

  std::string varRecord(const std::string& name) const {
    if (m_.receiver && m_.receiver->name == name) return m_.receiver->type.record;
    for (auto& p : m_.params)
      if (p.name == name) return p.type.record;
    for (auto& l : m_.locals)
      if (l.name == name) return l.type.record;
    return "";
  }

  const Program& prog_;
  const Method& m_;
  StepLimits lim_;
  int width_;
  ConcreteHeap heap_, oldHeap_;
  Env env_, oldEnv_;
  Value result_;
  int64_t steps_ = 0;
  std::map<int, int> dynCount_;
  std::vector<TraceStep> trace_;
};

}  // namespace

ExecResult execute(const Program& p, const Method& m, const Input& in, const StepLimits& limits,
                   int intWidth) {
  Interp it(p, m, limits, intWidth);
  return it.run(in);
}

bool satisfiesPre(const Program& p, const Method& m, const Input& in, int intWidth) {
  StepLimits lim;
  Interp it(p, m, lim, intWidth);
  return it.checkPre(in);
}

bool InputPool::add(const Program& p, const Method& m, const Input& in, int intWidth) {
  if (!satisfiesPre(p, m, in, intWidth))
    throw std::invalid_argument("input violates the method precondition");
  std::string key = canonicalInputJson(in);
  if (!seen_.insert(key).second) return false;
  inputs_.push_back(in);
  return true;
}

SieveResult sieve(const Program& p, const Method& candidate, const InputPool& pool,
                  const StepLimits& limits, int intWidth) {
  SieveResult r;
  for (const Input& in : pool.inputs()) {
    ExecResult res = execute(p, candidate, in, limits, intWidth);
    if (isViolation(res.outcome) || res.outcome == RunOutcome::PreViolated) {
      r.passed = false;
      r.witness = in;
      r.witnessOutcome = res.outcome;
      return r;
    }
    // Out-of-scope executions are neither pass nor fail: pass-within-scope.
  }
  return r;
}

}  // namespace stitch
