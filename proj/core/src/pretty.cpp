#include "stitch/pretty.hpp"

#include <sstream>

namespace stitch {

namespace {

// Binding strength; mirrors the parser's precedence ladder.
int prec(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Binary:
      switch (e.bop) {
        case BinOp::Or: return 1;
        case BinOp::Xor: return 2;
        case BinOp::And: return 3;
        case BinOp::Eq:
        case BinOp::Ne: return 4;
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: return 5;
        case BinOp::Add:
        case BinOp::Sub: return 6;
        case BinOp::Mul:
        case BinOp::Div:
        case BinOp::Mod: return 7;
      }
      return 0;
    case ExprKind::Unary: return 8;
    default: return 9;
  }
}

void emitExpr(std::ostringstream& os, const Expr& e, int parentPrec) {
  int p = prec(e);
  bool paren = p < parentPrec;
  if (paren) os << "(";
  switch (e.kind) {
    case ExprKind::IntLit: os << e.intVal; break;
    case ExprKind::BoolLit: os << (e.intVal ? "true" : "false"); break;
    case ExprKind::Null: os << "null"; break;
    case ExprKind::Var: os << e.name; break;
    case ExprKind::Nav:
      os << e.name;
      for (auto& f : e.fields) os << "." << f;
      break;
    case ExprKind::Unary:
      os << unOpToken(e.uop);
      emitExpr(os, e.kids[0], p + 1);
      break;
    case ExprKind::Binary: {
      // Left-associative chains reparse identically with prec p on the left
      // and p+1 on the right.
      emitExpr(os, e.kids[0], p);
      os << " " << binOpToken(e.bop) << " ";
      emitExpr(os, e.kids[1], p + 1);
      break;
    }
    case ExprKind::Old:
      os << "\\old(";
      emitExpr(os, e.kids[0], 0);
      os << ")";
      break;
    case ExprKind::Result: os << "\\result"; break;
    case ExprKind::Reach:
      os << "reach(";
      emitExpr(os, e.kids[0], 0);
      os << ", " << e.name << ", ";
      emitExpr(os, e.kids[1], 0);
      os << ")";
      break;
    case ExprKind::FreshRef: os << "$" << e.intVal; break;
  }
  if (paren) os << ")";
}

std::string exprStr(const Expr& e) {
  std::ostringstream os;
  emitExpr(os, e, 0);
  return os.str();
}

void indent(std::ostringstream& os, int n) {
  for (int i = 0; i < n; i++) os << "  ";
}

void emitBudget(std::ostringstream& os, const Statement& s) {
  if (s.mutGenLimit > 0) os << " //mutGenLimit " << s.mutGenLimit;
}

void emitStmt(std::ostringstream& os, const Statement& s, int depth) {
  indent(os, depth);
  switch (s.kind) {
    case StmtKind::VarAssign:
      os << s.var << " = " << exprStr(s.value) << ";";
      emitBudget(os, s);
      os << "\n";
      break;
    case StmtKind::FieldAssign:
      os << exprStr(s.lhsBase) << "." << s.field << " = " << exprStr(s.value) << ";";
      emitBudget(os, s);
      os << "\n";
      break;
    case StmtKind::New:
      os << s.var << " = new " << s.recordName << ";";
      emitBudget(os, s);
      os << "\n";
      break;
    case StmtKind::Return:
      os << "return";
      if (s.hasValue) os << " " << exprStr(s.value);
      os << ";";
      emitBudget(os, s);
      os << "\n";
      break;
    case StmtKind::Skip:
      os << ";";
      emitBudget(os, s);
      os << "\n";
      break;
    case StmtKind::If:
      os << "if (" << exprStr(s.cond) << ") {";
      emitBudget(os, s);
      os << "\n";
      for (auto& k : s.thenBlock) emitStmt(os, k, depth + 1);
      indent(os, depth);
      os << "}";
      if (!s.elseBlock.empty()) {
        os << " else {\n";
        for (auto& k : s.elseBlock) emitStmt(os, k, depth + 1);
        indent(os, depth);
        os << "}";
      }
      os << "\n";
      break;
    case StmtKind::While:
      os << "while (" << exprStr(s.cond) << ") {";
      emitBudget(os, s);
      os << "\n";
      for (auto& k : s.body) emitStmt(os, k, depth + 1);
      indent(os, depth);
      os << "}\n";
      break;
  }
}

bool isDefaultTrue(const Expr& e) { return e.kind == ExprKind::BoolLit && e.intVal == 1; }

void emitMethod(std::ostringstream& os, const Method& m) {
  os << "method " << m.name << "(";
  bool first = true;
  if (m.receiver) {
    os << "this: " << m.receiver->type.str();
    first = false;
  }
  for (auto& p : m.params) {
    if (!first) os << ", ";
    first = false;
    os << p.name << ": " << p.type.str();
  }
  os << ")";
  if (!m.returnType.isVoid()) os << ": " << m.returnType.str();
  os << "\n";
  if (!isDefaultTrue(m.contract.requiresClause))
    os << "  requires " << exprStr(m.contract.requiresClause) << ";\n";
  if (!isDefaultTrue(m.contract.ensuresClause))
    os << "  ensures " << exprStr(m.contract.ensuresClause) << ";\n";
  if (!isDefaultTrue(m.contract.invariantClause))
    os << "  invariant " << exprStr(m.contract.invariantClause) << ";\n";
  os << "{\n";
  for (auto& l : m.locals) os << "  var " << l.name << ": " << l.type.str() << ";\n";
  for (auto& s : m.body) emitStmt(os, s, 1);
  os << "}\n";
}

}  // namespace

std::string prettyPrint(const Expr& e) { return exprStr(e); }

std::string prettyPrint(const Statement& s) {
  std::ostringstream os;
  emitStmt(os, s, 0);
  std::string out = os.str();
  if (!out.empty() && out.back() == '\n') out.pop_back();
  return out;
}

std::string prettyPrint(const Method& m) {
  std::ostringstream os;
  emitMethod(os, m);
  return os.str();
}

std::string prettyPrint(const Program& p) {
  std::ostringstream os;
  for (auto& r : p.records) {
    os << "record " << r.name << " {\n";
    for (auto& f : r.fields) os << "  " << f.name << ": " << f.type.str() << ";\n";
    os << "}\n\n";
  }
  for (size_t i = 0; i < p.methods.size(); i++) {
    emitMethod(os, p.methods[i]);
    if (i + 1 < p.methods.size()) os << "\n";
  }
  return os.str();
}

}  // namespace stitch
