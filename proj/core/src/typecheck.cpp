#include "stitch/typecheck.hpp"

#include <set>

namespace stitch {

namespace {

enum class Ctx { Body, Requires, Ensures, Invariant, OldInsideEnsures };

class Checker {
 public:
  Checker(const Program& p, Method& m) : prog_(p), m_(m) {}

  void run() {
    std::set<std::string> names;
    auto declare = [&](const Param& p) {
      if (!names.insert(p.name).second)
        throw TypeError("duplicate variable '" + p.name + "' in method " + m_.name, 0, 0);
      if (p.type.isVoid()) throw TypeError("variable '" + p.name + "' cannot be void", 0, 0);
      checkDeclaredType(p.type);
      vars_[p.name] = p.type;
    };
    if (m_.receiver) {
      if (!m_.receiver->type.isRef())
        throw TypeError("'this' must have a record type in method " + m_.name, 0, 0);
      declare(*m_.receiver);
    }
    for (auto& p : m_.params) declare(p);
    for (auto& l : m_.locals) declare(l);
    if (!m_.returnType.isVoid()) checkDeclaredType(m_.returnType);

    expectBool(m_.contract.requiresClause, Ctx::Requires, "requires");
    expectBool(m_.contract.ensuresClause, Ctx::Ensures, "ensures");
    expectBool(m_.contract.invariantClause, Ctx::Invariant, "invariant");

    std::set<int> ids;
    checkBlock(m_.body, ids);
    if (!m_.returnType.isVoid() && !guaranteesReturn(m_.body))
      throw TypeError("method " + m_.name + " may fall off the end without returning", 0, 0);
  }

 private:
  void checkDeclaredType(const Type& t) {
    if (t.isRef() && !prog_.findRecord(t.record))
      throw TypeError("unknown record '" + t.record + "'", 0, 0);
  }

  void expectBool(Expr& e, Ctx ctx, const char* what) {
    Type t = check(e, ctx);
    if (!t.isBool())
      throw TypeError(std::string(what) + " clause must be bool, got " + t.str(), 0, 0);
  }

  const Type* lookupVar(const std::string& n) const {
    auto it = vars_.find(n);
    return it == vars_.end() ? nullptr : &it->second;
  }

  Type check(Expr& e, Ctx ctx) {
    switch (e.kind) {
      case ExprKind::IntLit: e.type = Type::intType(); return e.type;
      case ExprKind::BoolLit: e.type = Type::boolType(); return e.type;
      case ExprKind::Null:
        // Bare null gets its record type from the enclosing comparison or
        // assignment; stand-alone it is an untyped ref.
        e.type = Type::refType("");
        return e.type;
      case ExprKind::Var: {
        const Type* t = lookupVar(e.name);
        if (!t) throw TypeError("unknown variable '" + e.name + "'", 0, 0);
        if (ctx != Ctx::Body && isLocal(e.name))
          throw TypeError("local variable '" + e.name + "' not allowed in contracts", 0, 0);
        e.type = *t;
        return e.type;
      }
      case ExprKind::Nav: {
        const Type* t = lookupVar(e.name);
        if (!t) throw TypeError("unknown variable '" + e.name + "'", 0, 0);
        if (ctx != Ctx::Body && isLocal(e.name))
          throw TypeError("local variable '" + e.name + "' not allowed in contracts", 0, 0);
        Type cur = *t;
        for (auto& f : e.fields) cur = stepField(cur, f);
        e.type = cur;
        return e.type;
      }
      case ExprKind::Unary: {
        Type k = check(e.kids[0], ctx);
        if (e.uop == UnOp::Neg) {
          if (!k.isInt()) throw TypeError("unary '-' needs int, got " + k.str(), 0, 0);
          e.type = Type::intType();
        } else {
          if (!k.isBool()) throw TypeError("'!' needs bool, got " + k.str(), 0, 0);
          e.type = Type::boolType();
        }
        return e.type;
      }
      case ExprKind::Binary: {
        Type l = check(e.kids[0], ctx);
        Type r = check(e.kids[1], ctx);
        if (isArith(e.bop)) {
          if (!l.isInt() || !r.isInt())
            throw TypeError(std::string("'") + binOpToken(e.bop) + "' needs int operands", 0, 0);
          e.type = Type::intType();
        } else if (isRelational(e.bop)) {
          if (!l.isInt() || !r.isInt())
            throw TypeError(std::string("'") + binOpToken(e.bop) +
                                "' compares ints only (refs cannot be ordered)",
                            0, 0);
          e.type = Type::boolType();
        } else if (isEquality(e.bop)) {
          if (!comparable(l, r))
            throw TypeError("cannot compare " + l.str() + " with " + r.str(), 0, 0);
          e.type = Type::boolType();
        } else {  // connector
          if (!l.isBool() || !r.isBool())
            throw TypeError(std::string("'") + binOpToken(e.bop) + "' needs bool operands", 0, 0);
          e.type = Type::boolType();
        }
        return e.type;
      }
      case ExprKind::Old: {
        if (ctx != Ctx::Ensures)
          throw TypeError("\\old is only allowed in ensures clauses", 0, 0);
        e.type = check(e.kids[0], Ctx::OldInsideEnsures);
        return e.type;
      }
      case ExprKind::Result: {
        if (ctx != Ctx::Ensures)
          throw TypeError("\\result is only allowed in ensures clauses", 0, 0);
        if (m_.returnType.isVoid())
          throw TypeError("\\result used in a void method", 0, 0);
        e.type = m_.returnType;
        return e.type;
      }
      case ExprKind::Reach: {
        Type x = check(e.kids[0], ctx);
        Type y = check(e.kids[1], ctx);
        if (!x.isRef() || x.record.empty())
          throw TypeError("reach(x, f, y): x must have a record type", 0, 0);
        const RecordDecl* rec = prog_.findRecord(x.record);
        const Param* f = rec->findField(e.name);
        if (!f) throw TypeError("reach: unknown field '" + e.name + "' in " + x.record, 0, 0);
        if (!(f->type == x))
          throw TypeError("reach: field '" + e.name + "' must be " + x.record + " -> " +
                              x.record,
                          0, 0);
        if (!comparable(x, y)) throw TypeError("reach: x and y must have the same type", 0, 0);
        e.type = Type::boolType();
        return e.type;
      }
      case ExprKind::FreshRef:
        return e.type;  // assigned when introduced
    }
    throw TypeError("malformed expression", 0, 0);
  }

  Type stepField(const Type& cur, const std::string& f) {
    if (!cur.isRef() || cur.record.empty())
      throw TypeError("cannot navigate '." + f + "' from " + cur.str(), 0, 0);
    const RecordDecl* rec = prog_.findRecord(cur.record);
    if (!rec) throw TypeError("unknown record '" + cur.record + "'", 0, 0);
    const Param* fld = rec->findField(f);
    if (!fld) throw TypeError("unknown field '" + f + "' in record " + cur.record, 0, 0);
    return fld->type;
  }

  static bool comparable(const Type& l, const Type& r) {
    if (l.isInt() && r.isInt()) return true;
    if (l.isBool() && r.isBool()) return true;
    if (l.isRef() && r.isRef()) {
      // An untyped null compares with anything ref-typed.
      return l.record.empty() || r.record.empty() || l.record == r.record;
    }
    return false;
  }

  bool isLocal(const std::string& n) const {
    for (auto& l : m_.locals)
      if (l.name == n) return true;
    return false;
  }

  void checkAssignable(const Type& target, Expr& rhs, Ctx ctx) {
    Type rt = check(rhs, ctx);
    if (target.isRef() && rt.isRef() && rt.record.empty()) return;  // x = null
    if (!(target == rt))
      throw TypeError("cannot assign " + rt.str() + " to " + target.str(), 0, 0);
  }

  void checkBlock(std::vector<Statement>& stmts, std::set<int>& ids) {
    for (auto& s : stmts) checkStmt(s, ids);
  }

  void checkStmt(Statement& s, std::set<int>& ids) {
    if (s.mutGenLimit < 0) throw TypeError("mutGenLimit must be nonnegative", 0, 0);
    if (!ids.insert(s.id).second)
      throw TypeError("duplicate statement id " + std::to_string(s.id), 0, 0);
    switch (s.kind) {
      case StmtKind::VarAssign: {
        const Type* t = lookupVar(s.var);
        if (!t) throw TypeError("unknown variable '" + s.var + "'", 0, 0);
        if (s.var == "this") throw TypeError("cannot assign to 'this'", 0, 0);
        checkAssignable(*t, s.value, Ctx::Body);
        break;
      }
      case StmtKind::FieldAssign: {
        Type base = check(s.lhsBase, Ctx::Body);
        Type ft = stepField(base, s.field);
        checkAssignable(ft, s.value, Ctx::Body);
        break;
      }
      case StmtKind::If: {
        Type c = check(s.cond, Ctx::Body);
        if (!c.isBool()) throw TypeError("if condition must be bool, got " + c.str(), 0, 0);
        checkBlock(s.thenBlock, ids);
        checkBlock(s.elseBlock, ids);
        break;
      }
      case StmtKind::While: {
        Type c = check(s.cond, Ctx::Body);
        if (!c.isBool()) throw TypeError("while condition must be bool, got " + c.str(), 0, 0);
        checkBlock(s.body, ids);
        break;
      }
      case StmtKind::Return: {
        if (m_.returnType.isVoid()) {
          if (s.hasValue) throw TypeError("void method returns a value", 0, 0);
        } else {
          if (!s.hasValue) throw TypeError("non-void method returns nothing", 0, 0);
          checkAssignable(m_.returnType, s.value, Ctx::Body);
        }
        break;
      }
      case StmtKind::New: {
        const Type* t = lookupVar(s.var);
        if (!t) throw TypeError("unknown variable '" + s.var + "'", 0, 0);
        if (s.var == "this") throw TypeError("cannot assign to 'this'", 0, 0);
        if (!prog_.findRecord(s.recordName))
          throw TypeError("unknown record '" + s.recordName + "'", 0, 0);
        if (!(*t == Type::refType(s.recordName)))
          throw TypeError("new " + s.recordName + " assigned to " + t->str(), 0, 0);
        break;
      }
      case StmtKind::Skip: break;
    }
  }

  static bool guaranteesReturn(const std::vector<Statement>& stmts) {
    for (auto& s : stmts) {
      if (s.kind == StmtKind::Return) return true;
      if (s.kind == StmtKind::If && !s.elseBlock.empty() && guaranteesReturn(s.thenBlock) &&
          guaranteesReturn(s.elseBlock))
        return true;
    }
    return false;
  }

  const Program& prog_;
  Method& m_;
  std::map<std::string, Type> vars_;
};

}  // namespace

void typecheckMethod(const Program& p, Method& m) { Checker(p, m).run(); }

void typecheck(Program& p) {
  std::set<std::string> recNames;
  for (auto& r : p.records) {
    if (!recNames.insert(r.name).second)
      throw TypeError("duplicate record '" + r.name + "'", 0, 0);
    std::set<std::string> fieldNames;
    for (auto& f : r.fields) {
      if (!fieldNames.insert(f.name).second)
        throw TypeError("duplicate field '" + f.name + "' in record " + r.name, 0, 0);
      if (f.type.isVoid()) throw TypeError("field '" + f.name + "' cannot be void", 0, 0);
    }
  }
  // Ref targets may be declared later in the file (recursive shapes).
  for (auto& r : p.records)
    for (auto& f : r.fields)
      if (f.type.isRef() && !p.findRecord(f.type.record))
        throw TypeError("field '" + f.name + "' references unknown record '" + f.type.record + "'",
                        0, 0);
  std::set<std::string> methodNames;
  for (auto& m : p.methods) {
    if (!methodNames.insert(m.name).second)
      throw TypeError("duplicate method '" + m.name + "'", 0, 0);
    typecheckMethod(p, m);
  }
}

}  // namespace stitch
