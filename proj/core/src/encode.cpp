#include "stitch/encode.hpp"

#include <algorithm>

#include "stitch/diagnostics.hpp"

namespace stitch {

std::vector<GroupId> Encoding::groupsOfKind(ConjunctKind k) const {
  std::vector<GroupId> out;
  for (size_t g = 0; g < groupKeys.size(); g++)
    if (groupKeys[g].kind == k) out.push_back(static_cast<GroupId>(g));
  return out;
}

std::vector<GroupId> Encoding::allGroups() const {
  std::vector<GroupId> out;
  for (size_t g = 0; g < groupKeys.size(); g++) out.push_back(static_cast<GroupId>(g));
  return out;
}

namespace {

struct SymVal {
  Type type;
  Bv bits;
};

struct SymHeap {
  std::map<std::string, std::vector<Bit>> live;
  std::map<std::string, std::map<std::string, std::vector<SymVal>>> fields;
};

struct SymState {
  std::map<std::string, SymVal> vars;
  SymHeap heap;
  Bit returned;
  Bit trapV;  // null deref / division by zero: contract violation
  Bit trapS;  // out of scope (loop residual, heap exhausted): excluded path
  SymVal result;
};

struct EvalRes {
  SymVal val;
  Bit trap;
};

class Encoder {
 public:
  Encoder(const Program& p, const Method& m, const Scope& s, Encoding& enc)
      : prog_(p), m_(m), scope_(s), enc_(enc), b_(enc.cnf) {
    refBits_ = bitsForRange(scope_.objectsPerRecord);
  }

  void run(const UnrolledMethod& u, const EncodeOptions& opts) {
    b_.setGroupIsolation(opts.isolateGroups);
    buildInitialState(opts);
    cur_ = init_;

    if (opts.assertContractPre) {
      GroupId gReq = newGroup(ConjunctKind::Requires);
      b_.setGroup(gReq);
      if (m_.receiver) b_.assertBit(~isNull(init_.vars.at("this").bits));
      EvalRes req = eval(m_.contract.requiresClause, /*inOld=*/false);
      b_.assertBit(~req.trap);
      b_.assertBit(req.val.bits[0]);

      GroupId gInv = newGroup(ConjunctKind::InvariantPre);
      b_.setGroup(gInv);
      EvalRes inv = eval(m_.contract.invariantClause, false);
      b_.assertBit(~inv.trap);
      b_.assertBit(inv.val.bits[0]);
    }

    encodeBlock(u.body, b_.trueBit());

    GroupId gInvPost = newGroup(ConjunctKind::InvariantPost);
    b_.setGroup(gInvPost);
    EvalRes invf = eval(m_.contract.invariantClause, false);
    Bit invOk = b_.mkAnd(~invf.trap, invf.val.bits[0]);

    GroupId gEns = newGroup(ConjunctKind::Ensures);
    b_.setGroup(gEns);
    EvalRes ensf = eval(m_.contract.ensuresClause, false);
    Bit ensOk = b_.mkAnd(~ensf.trap, ensf.val.bits[0]);

    // Final assertion glue stays in the ensures conjunct.
    if (opts.goal == EncodeOptions::Goal::FindViolation) {
      b_.assertBit(~cur_.trapS);
      b_.assertBit(b_.mkOr(cur_.trapV, ~b_.mkAnd(invOk, ensOk)));
    } else {
      b_.assertBit(~cur_.trapS);
      b_.assertBit(~cur_.trapV);
      b_.assertBit(invOk);
      b_.assertBit(ensOk);
    }
  }

 private:
  // ---- groups ----

  GroupId newGroup(ConjunctKind k, int stmtId = -1, int replica = -1) {
    enc_.groupKeys.push_back(GroupKey{k, stmtId, replica});
    return static_cast<GroupId>(enc_.groupKeys.size() - 1);
  }

  // ---- types/widths ----

  int widthOf(const Type& t) const {
    if (t.isInt()) return scope_.intWidth;
    if (t.isBool()) return 1;
    if (t.isRef()) return refBits_;
    throw InternalError("void value encoded");
  }

  Bit isNull(const Bv& refBv) { return b_.eqConst(refBv, 0); }

  void constrainRefRange(const Bv& bv) {
    const int64_t maxVal = (1ll << bv.size()) - 1;
    for (int64_t v = scope_.objectsPerRecord + 1; v <= maxVal; v++) b_.forbidValue(bv, v);
  }

  // ---- initial state ----

  Bv pinnedOrFresh(const Type& t, const Value* pinned) {
    const int w = widthOf(t);
    if (pinned) return b_.constBv(pinned->v, w);
    return b_.freshBv(w);
  }

  void buildInitialState(const EncodeOptions& opts) {
    b_.setGroup(kNoGroup);  // structural input-domain constraints are always on
    const int N = scope_.objectsPerRecord;
    const Input* pin = opts.pin;

    // Pass 1: allocate every liveness and field bit (records may reference
    // records declared later).
    for (auto& rec : prog_.records) {
      auto& live = init_.heap.live[rec.name];
      for (int s = 0; s < N; s++) {
        bool pinnedLive =
            pin && pin->heap.objects.at(rec.name)[static_cast<size_t>(s)].live;
        live.push_back(pin ? b_.constBit(pinnedLive) : b_.freshBit());
      }
      enc_.layout.live[rec.name] = live;
      for (auto& f : rec.fields) {
        auto& slots = init_.heap.fields[rec.name][f.name];
        for (int s = 0; s < N; s++) {
          const Value* pv = nullptr;
          Value tmp;
          if (pin) {
            tmp = pin->heap.objects.at(rec.name)[static_cast<size_t>(s)].fields.at(f.name);
            pv = &tmp;
          }
          SymVal v{f.type, pinnedOrFresh(f.type, pv)};
          enc_.layout.fields[rec.name][f.name].push_back(v.bits);
          slots.push_back(std::move(v));
        }
      }
    }

    // Pass 2: the input-domain shape for free initial states. Live slots form
    // a prefix, refs stay in range and live slots reference live slots or
    // null; dead slots hold defaults (all-zero encodings).
    if (!pin) {
      for (auto& rec : prog_.records) {
        auto& live = init_.heap.live.at(rec.name);
        for (int s = 0; s + 1 < N; s++)
          b_.addClause({live[static_cast<size_t>(s)], ~live[static_cast<size_t>(s + 1)]});
        for (auto& f : rec.fields) {
          auto& slots = init_.heap.fields.at(rec.name).at(f.name);
          for (int s = 0; s < N; s++) {
            if (f.type.isRef()) {
              constrainRefRange(slots[static_cast<size_t>(s)].bits);
              for (int t = 0; t < N; t++) {
                Bit eq = b_.eqConst(slots[static_cast<size_t>(s)].bits, t + 1);
                b_.addClause({~live[static_cast<size_t>(s)], ~eq,
                              init_.heap.live.at(f.type.record)[static_cast<size_t>(t)]});
              }
            }
            for (Bit bit : slots[static_cast<size_t>(s)].bits)
              b_.addClause({live[static_cast<size_t>(s)], ~bit});
          }
        }
      }
    }

    if (m_.receiver) {
      const Value* pv = pin ? &pin->receiver : nullptr;
      SymVal recv{m_.receiver->type, pinnedOrFresh(m_.receiver->type, pv)};
      enc_.layout.receiver = recv.bits;
      if (!pin) {
        constrainRefRange(recv.bits);
        for (int t = 0; t < N; t++) {
          Bit eq = b_.eqConst(recv.bits, t + 1);
          b_.addClause({~eq, init_.heap.live.at(m_.receiver->type.record)[static_cast<size_t>(t)]});
        }
      }
      init_.vars["this"] = std::move(recv);
    }
    for (size_t i = 0; i < m_.params.size(); i++) {
      auto& p = m_.params[i];
      const Value* pv = pin ? &pin->args[i] : nullptr;
      SymVal v{p.type, pinnedOrFresh(p.type, pv)};
      enc_.layout.args.push_back(v.bits);
      if (!pin && p.type.isRef()) {
        constrainRefRange(v.bits);
        for (int t = 0; t < N; t++) {
          Bit eq = b_.eqConst(v.bits, t + 1);
          b_.addClause({~eq, init_.heap.live.at(p.type.record)[static_cast<size_t>(t)]});
        }
      }
      init_.vars[p.name] = std::move(v);
    }
    for (auto& l : m_.locals)
      init_.vars[l.name] = SymVal{l.type, b_.constBv(0, widthOf(l.type))};

    init_.returned = b_.falseBit();
    init_.trapV = b_.falseBit();
    init_.trapS = b_.falseBit();
    init_.result = SymVal{m_.returnType.isVoid() ? Type::boolType() : m_.returnType,
                          b_.constBv(0, m_.returnType.isVoid() ? 1 : widthOf(m_.returnType))};

    // Variabilization ledger: full-domain fresh values (refs may be dead).
    if (opts.ledger) {
      for (auto& ent : opts.ledger->entries) {
        int w = ent.width > 0 ? ent.width : widthOf(ent.type);
        Bv bits = b_.freshBv(w);
        if (ent.type.isRef() && ent.width == 0) constrainRefRange(bits);
        if (ent.maxValue >= 0)
          for (int64_t v = ent.maxValue + 1; v < (1ll << w); v++) b_.forbidValue(bits, v);
        ledger_.push_back(SymVal{ent.type, std::move(bits)});
      }
    }
  }

 public:
  const std::vector<SymVal>& ledgerVals() const { return ledger_; }
  CircuitBuilder& builder() { return b_; }

 private:
  // ---- expression evaluation ----

  EvalRes eval(const Expr& e, bool inOld) {
    const SymState& st = inOld ? init_ : cur_;
    switch (e.kind) {
      case ExprKind::IntLit:
        return {SymVal{Type::intType(),
                       b_.constBv(wrapToWidth(e.intVal, scope_.intWidth), scope_.intWidth)},
                b_.falseBit()};
      case ExprKind::BoolLit:
        return {SymVal{Type::boolType(), {b_.constBit(e.intVal != 0)}}, b_.falseBit()};
      case ExprKind::Null:
        return {SymVal{Type::refType(""), b_.constBv(0, refBits_)}, b_.falseBit()};
      case ExprKind::Var: {
        auto it = st.vars.find(e.name);
        if (it == st.vars.end()) throw InternalError("encode: unbound variable " + e.name);
        return {it->second, b_.falseBit()};
      }
      case ExprKind::Nav: {
        auto it = st.vars.find(e.name);
        if (it == st.vars.end()) throw InternalError("encode: unbound variable " + e.name);
        return navigate(it->second, e.fields, st);
      }
      case ExprKind::Unary: {
        EvalRes k = eval(e.kids[0], inOld);
        if (e.uop == UnOp::Not)
          return {SymVal{Type::boolType(), {~k.val.bits[0]}}, k.trap};
        return {SymVal{Type::intType(), b_.negBv(k.val.bits)}, k.trap};
      }
      case ExprKind::Binary: return evalBinary(e, inOld);
      case ExprKind::Old: return eval(e.kids[0], true);
      case ExprKind::Result: return {cur_.result, b_.falseBit()};
      case ExprKind::Reach: return evalReach(e, inOld);
      case ExprKind::FreshRef:
        return {ledger_.at(static_cast<size_t>(e.intVal)), b_.falseBit()};
    }
    throw InternalError("encode: malformed expression");
  }

  EvalRes evalBinary(const Expr& e, bool inOld) {
    const BinOp op = e.bop;
    if (op == BinOp::And) {
      EvalRes l = eval(e.kids[0], inOld);
      EvalRes r = eval(e.kids[1], inOld);
      Bit trap = b_.mkOr(l.trap, b_.mkAnd(l.val.bits[0], r.trap));
      return {SymVal{Type::boolType(), {b_.mkAnd(l.val.bits[0], r.val.bits[0])}}, trap};
    }
    if (op == BinOp::Or) {
      EvalRes l = eval(e.kids[0], inOld);
      EvalRes r = eval(e.kids[1], inOld);
      Bit trap = b_.mkOr(l.trap, b_.mkAnd(~l.val.bits[0], r.trap));
      return {SymVal{Type::boolType(), {b_.mkOr(l.val.bits[0], r.val.bits[0])}}, trap};
    }
    EvalRes l = eval(e.kids[0], inOld);
    EvalRes r = eval(e.kids[1], inOld);
    Bit trap = b_.mkOr(l.trap, r.trap);
    switch (op) {
      case BinOp::Xor:
        return {SymVal{Type::boolType(), {b_.mkXor(l.val.bits[0], r.val.bits[0])}}, trap};
      case BinOp::Add:
        return {SymVal{Type::intType(), b_.addBv(l.val.bits, r.val.bits)}, trap};
      case BinOp::Sub:
        return {SymVal{Type::intType(), b_.subBv(l.val.bits, r.val.bits)}, trap};
      case BinOp::Mul:
        return {SymVal{Type::intType(), b_.mulBv(l.val.bits, r.val.bits)}, trap};
      case BinOp::Div:
      case BinOp::Mod: {
        Bit zero = b_.eqConst(r.val.bits, 0);
        auto [q, rem] = b_.sdivmod(l.val.bits, r.val.bits);
        return {SymVal{Type::intType(), op == BinOp::Div ? q : rem}, b_.mkOr(trap, zero)};
      }
      case BinOp::Lt:
        return {SymVal{Type::boolType(), {b_.slt(l.val.bits, r.val.bits)}}, trap};
      case BinOp::Le:
        return {SymVal{Type::boolType(), {b_.sle(l.val.bits, r.val.bits)}}, trap};
      case BinOp::Gt:
        return {SymVal{Type::boolType(), {b_.slt(r.val.bits, l.val.bits)}}, trap};
      case BinOp::Ge:
        return {SymVal{Type::boolType(), {b_.sle(r.val.bits, l.val.bits)}}, trap};
      case BinOp::Eq:
        return {SymVal{Type::boolType(), {b_.eqBv(l.val.bits, r.val.bits)}}, trap};
      case BinOp::Ne:
        return {SymVal{Type::boolType(), {~b_.eqBv(l.val.bits, r.val.bits)}}, trap};
      default: throw InternalError("encode: unexpected operator");
    }
  }

  // Field select: mux over slots; null yields the type's zero (the consumer
  // carries the trap bit).
  SymVal heapSelect(const SymState& st, const std::string& record, const std::string& field,
                    const Bv& ref) {
    auto& slots = st.heap.fields.at(record).at(field);
    SymVal acc{slots[0].type, b_.constBv(0, static_cast<int>(slots[0].bits.size()))};
    for (int s = 0; s < scope_.objectsPerRecord; s++) {
      Bit hit = b_.eqConst(ref, s + 1);
      acc.bits = b_.iteBv(hit, slots[static_cast<size_t>(s)].bits, acc.bits);
    }
    return acc;
  }

  EvalRes navigate(const SymVal& base, const std::vector<std::string>& fields,
                   const SymState& st) {
    SymVal cur = base;
    Bit trap = b_.falseBit();
    std::string rec = cur.type.record;
    for (auto& f : fields) {
      trap = b_.mkOr(trap, isNull(cur.bits));
      const RecordDecl* rd = prog_.findRecord(rec);
      const Param* fp = rd->findField(f);
      cur = heapSelect(st, rec, f, cur.bits);
      cur.type = fp->type;
      rec = fp->type.isRef() ? fp->type.record : "";
    }
    return {cur, trap};
  }

  EvalRes evalReach(const Expr& e, bool inOld) {
    const SymState& st = inOld ? init_ : cur_;
    EvalRes x = eval(e.kids[0], inOld);
    EvalRes y = eval(e.kids[1], inOld);
    const std::string rec = e.kids[0].type.record;
    const int N = scope_.objectsPerRecord;
    auto& fslots = st.heap.fields.at(rec).at(e.name);

    std::vector<Bit> reach;  // per slot
    Bit reachNull = isNull(x.val.bits);
    for (int s = 0; s < N; s++) reach.push_back(b_.eqConst(x.val.bits, s + 1));
    for (int iter = 0; iter < N; iter++) {
      std::vector<Bit> next = reach;
      Bit nextNull = reachNull;
      for (int s = 0; s < N; s++) {
        const Bv& succ = fslots[static_cast<size_t>(s)].bits;
        nextNull = b_.mkOr(nextNull, b_.mkAnd(reach[static_cast<size_t>(s)], isNull(succ)));
        for (int t = 0; t < N; t++)
          next[static_cast<size_t>(t)] =
              b_.mkOr(next[static_cast<size_t>(t)],
                      b_.mkAnd(reach[static_cast<size_t>(s)], b_.eqConst(succ, t + 1)));
      }
      reach = std::move(next);
      reachNull = nextNull;
    }
    Bit hit = b_.falseBit();
    for (int t = 0; t < N; t++)
      hit = b_.mkOr(hit, b_.mkAnd(b_.eqConst(y.val.bits, t + 1), reach[static_cast<size_t>(t)]));
    Bit res = b_.mkIte(isNull(y.val.bits), reachNull, hit);
    return {SymVal{Type::boolType(), {res}}, b_.mkOr(x.trap, y.trap)};
  }

  // ---- statements ----

  Bit effectiveGuard(Bit g) {
    return b_.mkAnd(b_.mkAnd(g, ~cur_.returned), b_.mkAnd(~cur_.trapV, ~cur_.trapS));
  }

  void raiseViolation(Bit cond) { cur_.trapV = b_.mkOr(cur_.trapV, cond); }
  void raiseScope(Bit cond) { cur_.trapS = b_.mkOr(cur_.trapS, cond); }

  void assignVar(const std::string& name, Bit when, const SymVal& v) {
    SymVal& slot = cur_.vars.at(name);
    slot.bits = b_.iteBv(when, v.bits, slot.bits);
  }

  void storeField(const std::string& record, const std::string& field, const Bv& ref, Bit when,
                  const Bv& value) {
    auto& slots = cur_.heap.fields.at(record).at(field);
    for (int s = 0; s < scope_.objectsPerRecord; s++) {
      Bit hit = b_.mkAnd(when, b_.eqConst(ref, s + 1));
      slots[static_cast<size_t>(s)].bits = b_.iteBv(hit, value, slots[static_cast<size_t>(s)].bits);
    }
  }

  void encodeBlock(const std::vector<UnrolledStmt>& body, Bit guard) {
    for (auto& s : body) encodeStmt(s, guard);
  }

  void encodeStmt(const UnrolledStmt& s, Bit guard) {
    GroupId g = newGroup(ConjunctKind::Code, s.originId, s.replica);
    b_.setGroup(g);
    Bit eff = effectiveGuard(guard);
    switch (s.kind) {
      case UnrolledStmt::Kind::Assign: {
        EvalRes v = eval(s.value, false);
        raiseViolation(b_.mkAnd(eff, v.trap));
        SymVal coerced = coerce(v.val, cur_.vars.at(s.var).type);
        assignVar(s.var, b_.mkAnd(eff, ~v.trap), coerced);
        break;
      }
      case UnrolledStmt::Kind::FieldAssign: {
        EvalRes base = eval(s.lhsBase, false);
        Bit writeTrap = b_.mkOr(base.trap, isNull(base.val.bits));
        EvalRes v = eval(s.value, false);
        Bit anyTrap = b_.mkOr(writeTrap, v.trap);
        raiseViolation(b_.mkAnd(eff, anyTrap));
        const std::string& rec = base.val.type.record;
        const Param* fp = prog_.findRecord(rec)->findField(s.field);
        SymVal coerced = coerce(v.val, fp->type);
        storeField(rec, s.field, base.val.bits, b_.mkAnd(eff, ~anyTrap), coerced.bits);
        break;
      }
      case UnrolledStmt::Kind::If: {
        EvalRes c = eval(s.cond, false);
        raiseViolation(b_.mkAnd(eff, c.trap));
        Bit takeThen = b_.mkAnd(eff, b_.mkAnd(~c.trap, c.val.bits[0]));
        Bit takeElse = b_.mkAnd(eff, b_.mkAnd(~c.trap, ~c.val.bits[0]));
        encodeBlock(s.thenB, takeThen);
        encodeBlock(s.elseB, takeElse);
        break;
      }
      case UnrolledStmt::Kind::Return: {
        if (s.hasValue) {
          EvalRes v = eval(s.value, false);
          raiseViolation(b_.mkAnd(eff, v.trap));
          Bit ok = b_.mkAnd(eff, ~v.trap);
          SymVal coerced = coerce(v.val, m_.returnType);
          cur_.result.bits = b_.iteBv(ok, coerced.bits, cur_.result.bits);
          cur_.returned = b_.mkOr(cur_.returned, ok);
        } else {
          cur_.returned = b_.mkOr(cur_.returned, eff);
        }
        break;
      }
      case UnrolledStmt::Kind::New: {
        auto& live = cur_.heap.live.at(s.recordName);
        Bit allLive = b_.trueBit();
        std::vector<Bit> firstDead;
        for (int i = 0; i < scope_.objectsPerRecord; i++) {
          firstDead.push_back(b_.mkAnd(allLive, ~live[static_cast<size_t>(i)]));
          allLive = b_.mkAnd(allLive, live[static_cast<size_t>(i)]);
        }
        raiseScope(b_.mkAnd(eff, allLive));
        Bit doAlloc = b_.mkAnd(eff, ~allLive);
        Bv newRef = b_.constBv(0, refBits_);
        for (int i = 0; i < scope_.objectsPerRecord; i++) {
          Bit here = b_.mkAnd(doAlloc, firstDead[static_cast<size_t>(i)]);
          live[static_cast<size_t>(i)] = b_.mkOr(live[static_cast<size_t>(i)], here);
          newRef = b_.iteBv(firstDead[static_cast<size_t>(i)], b_.constBv(i + 1, refBits_), newRef);
          // freshly allocated slots start from defaults
          const RecordDecl* rd = prog_.findRecord(s.recordName);
          for (auto& f : rd->fields) {
            auto& slots = cur_.heap.fields.at(s.recordName).at(f.name);
            slots[static_cast<size_t>(i)].bits =
                b_.iteBv(here, b_.constBv(0, static_cast<int>(slots[static_cast<size_t>(i)].bits.size())),
                         slots[static_cast<size_t>(i)].bits);
          }
        }
        assignVar(s.var, doAlloc, SymVal{Type::refType(s.recordName), newRef});
        break;
      }
      case UnrolledStmt::Kind::Skip: break;
      case UnrolledStmt::Kind::ScopeCheck: {
        EvalRes c = eval(s.cond, false);
        raiseViolation(b_.mkAnd(eff, c.trap));
        raiseScope(b_.mkAnd(eff, b_.mkAnd(~c.trap, c.val.bits[0])));
        break;
      }
      case UnrolledStmt::Kind::AbstractWrite: {
        const SymVal& sel = ledger_.at(static_cast<size_t>(s.selectorLedger));
        for (size_t fi = 0; fi < s.forms.size(); fi++) {
          const auto& form = s.forms[fi];
          Bit here = b_.mkAnd(eff, b_.eqConst(sel.bits, static_cast<int64_t>(fi)));
          const SymVal& value = ledger_.at(static_cast<size_t>(form.valueLedger));
          if (!form.isField) {
            assignVar(form.var, here, value);
          } else {
            const SymVal& nav = ledger_.at(static_cast<size_t>(form.navLedger));
            Bit bad = b_.mkAnd(here, isNull(nav.bits));
            raiseViolation(bad);
            storeField(form.record, form.field, nav.bits, b_.mkAnd(here, ~bad), value.bits);
          }
        }
        break;
      }
    }
  }

  // Null literals carry an empty record tag; widths still line up because all
  // records share the slot count.
  SymVal coerce(const SymVal& v, const Type& target) {
    SymVal out = v;
    out.type = target;
    if (static_cast<int>(out.bits.size()) != widthOf(target))
      throw InternalError("encode: width mismatch in assignment");
    return out;
  }

  const Program& prog_;
  const Method& m_;
  Scope scope_;
  Encoding& enc_;
  CircuitBuilder b_;
  int refBits_;
  SymState init_, cur_;
  std::vector<SymVal> ledger_;
};

}  // namespace

Encoding encodeRun(const Program& p, const Method& m, const UnrolledMethod& unrolled,
                   const Scope& s, const EncodeOptions& opts) {
  s.validate();
  Encoding enc;
  enc.program = &p;
  enc.method = m;
  enc.scope = s;
  Encoder e(p, m, s, enc);
  e.run(unrolled, opts);
  return enc;
}

Encoding encodeCorrectness(const Program& p, const Method& m, const Scope& s) {
  UnrolledMethod u = unroll(m, s);
  EncodeOptions opts;
  opts.goal = EncodeOptions::Goal::FindViolation;
  return encodeRun(p, m, u, s, opts);
}

Encoding encodeTraceRefutation(const Program& p, const Method& m, const Input& cex,
                               const Scope& s) {
  ExecResult replay = execute(p, m, cex, StepLimits::forMethod(m, s), s.intWidth);
  if (!isViolation(replay.outcome))
    throw InternalError(std::string("trace refutation: input does not violate the contract (") +
                        runOutcomeName(replay.outcome) + ")");
  UnrolledMethod u = unroll(m, s);
  EncodeOptions opts;
  opts.goal = EncodeOptions::Goal::FindPassing;
  opts.pin = &cex;
  opts.isolateGroups = true;  // cores must blame statements cleanly
  return encodeRun(p, m, u, s, opts);
}

Input extractInput(const Encoding& e, const std::vector<bool>& model) {
  const Program& p = *e.program;
  Input in;
  in.heap = ConcreteHeap::empty(p, e.scope.objectsPerRecord, e.scope.intWidth);
  for (auto& rec : p.records) {
    auto& liveBits = e.layout.live.at(rec.name);
    auto& slots = in.heap.objects[rec.name];
    for (int s = 0; s < e.scope.objectsPerRecord; s++) {
      slots[static_cast<size_t>(s)].live = CircuitBuilder::bitValue(liveBits[static_cast<size_t>(s)], model);
      for (auto& f : rec.fields) {
        const Bv& bits = e.layout.fields.at(rec.name).at(f.name)[static_cast<size_t>(s)];
        Value v;
        if (f.type.isInt())
          v = Value::intV(CircuitBuilder::signedValue(bits, model));
        else if (f.type.isBool())
          v = Value::boolV(CircuitBuilder::unsignedValue(bits, model) != 0);
        else
          v = Value::refV(CircuitBuilder::unsignedValue(bits, model));
        slots[static_cast<size_t>(s)].fields[f.name] = v;
      }
    }
  }
  const Method& m = e.method;
  if (m.receiver)
    in.receiver = Value::refV(CircuitBuilder::unsignedValue(e.layout.receiver, model));
  for (size_t i = 0; i < m.params.size(); i++) {
    const Bv& bits = e.layout.args[i];
    if (m.params[i].type.isInt())
      in.args.push_back(Value::intV(CircuitBuilder::signedValue(bits, model)));
    else if (m.params[i].type.isBool())
      in.args.push_back(Value::boolV(CircuitBuilder::unsignedValue(bits, model) != 0));
    else
      in.args.push_back(Value::refV(CircuitBuilder::unsignedValue(bits, model)));
  }
  return in;
}

DecodedCex decodeModel(const Program& p, const Encoding& e, const std::vector<bool>& model) {
  DecodedCex out;
  out.input = extractInput(e, model);
  out.replay = execute(p, e.method, out.input, StepLimits::forMethod(e.method, e.scope),
                       e.scope.intWidth);
  if (!isViolation(out.replay.outcome))
    throw InternalError(std::string("decoded model does not replay to a violation (") +
                        runOutcomeName(out.replay.outcome) + ")");
  return out;
}

void blockInput(Encoding& e, const Input& in) {
  std::vector<Lit> clause;
  auto addBit = [&](Bit bit, bool want) {
    if (bit.var() == 0) return;  // constant; cannot differ
    clause.push_back(want ? ~bit : bit);
  };
  auto addBv = [&](const Bv& bits, int64_t value) {
    for (size_t i = 0; i < bits.size(); i++) addBit(bits[i], (value >> i) & 1);
  };
  const Program& p = *e.program;
  for (auto& rec : p.records) {
    auto& slots = in.heap.objects.at(rec.name);
    for (int s = 0; s < e.scope.objectsPerRecord; s++) {
      addBit(e.layout.live.at(rec.name)[static_cast<size_t>(s)], slots[static_cast<size_t>(s)].live);
      for (auto& f : rec.fields)
        addBv(e.layout.fields.at(rec.name).at(f.name)[static_cast<size_t>(s)],
              slots[static_cast<size_t>(s)].fields.at(f.name).v);
    }
  }
  if (e.method.receiver) addBv(e.layout.receiver, in.receiver.v);
  for (size_t i = 0; i < e.layout.args.size(); i++) addBv(e.layout.args[i], in.args[i].v);
  e.cnf.add(std::move(clause), kNoGroup);
}

}  // namespace stitch
