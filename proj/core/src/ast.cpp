#include "stitch/ast.hpp"

#include <algorithm>
#include <sstream>

namespace stitch {

std::string Type::str() const {
  switch (kind) {
    case TypeKind::Int: return "int";
    case TypeKind::Bool: return "bool";
    case TypeKind::Ref: return record;
    case TypeKind::Void: return "void";
  }
  return "?";
}

const char* binOpToken(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Mod: return "%";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    case BinOp::Xor: return "^";
  }
  return "?";
}

const char* unOpToken(UnOp op) { return op == UnOp::Neg ? "-" : "!"; }

bool isArith(BinOp op) {
  return op == BinOp::Add || op == BinOp::Sub || op == BinOp::Mul || op == BinOp::Div ||
         op == BinOp::Mod;
}
bool isRelational(BinOp op) {
  return op == BinOp::Lt || op == BinOp::Le || op == BinOp::Gt || op == BinOp::Ge;
}
bool isEquality(BinOp op) { return op == BinOp::Eq || op == BinOp::Ne; }
bool isConnector(BinOp op) { return op == BinOp::And || op == BinOp::Or || op == BinOp::Xor; }

Expr Expr::intLit(int64_t v) {
  Expr e;
  e.kind = ExprKind::IntLit;
  e.intVal = v;
  e.type = Type::intType();
  return e;
}
Expr Expr::boolLit(bool b) {
  Expr e;
  e.kind = ExprKind::BoolLit;
  e.intVal = b ? 1 : 0;
  e.type = Type::boolType();
  return e;
}
Expr Expr::nullLit() {
  Expr e;
  e.kind = ExprKind::Null;
  return e;
}
Expr Expr::var(std::string n) {
  Expr e;
  e.kind = ExprKind::Var;
  e.name = std::move(n);
  return e;
}
Expr Expr::nav(std::string base, std::vector<std::string> fs) {
  Expr e;
  e.kind = ExprKind::Nav;
  e.name = std::move(base);
  e.fields = std::move(fs);
  return e;
}
Expr Expr::unary(UnOp op, Expr k) {
  Expr e;
  e.kind = ExprKind::Unary;
  e.uop = op;
  e.kids.push_back(std::move(k));
  return e;
}
Expr Expr::binary(BinOp op, Expr l, Expr r) {
  Expr e;
  e.kind = ExprKind::Binary;
  e.bop = op;
  e.kids.push_back(std::move(l));
  e.kids.push_back(std::move(r));
  return e;
}
Expr Expr::oldOf(Expr k) {
  Expr e;
  e.kind = ExprKind::Old;
  e.kids.push_back(std::move(k));
  return e;
}
Expr Expr::resultRef() {
  Expr e;
  e.kind = ExprKind::Result;
  return e;
}
Expr Expr::reach(Expr x, std::string field, Expr y) {
  Expr e;
  e.kind = ExprKind::Reach;
  e.name = std::move(field);
  e.kids.push_back(std::move(x));
  e.kids.push_back(std::move(y));
  e.type = Type::boolType();
  return e;
}
Expr Expr::fresh(int ledgerIndex, Type t) {
  Expr e;
  e.kind = ExprKind::FreshRef;
  e.intVal = ledgerIndex;
  e.type = std::move(t);
  return e;
}

bool Expr::operator==(const Expr& o) const {
  if (kind != o.kind) return false;
  switch (kind) {
    case ExprKind::IntLit:
    case ExprKind::BoolLit:
    case ExprKind::FreshRef:
      if (intVal != o.intVal) return false;
      break;
    case ExprKind::Var:
      if (name != o.name) return false;
      break;
    case ExprKind::Nav:
      if (name != o.name || fields != o.fields) return false;
      break;
    case ExprKind::Unary:
      if (uop != o.uop) return false;
      break;
    case ExprKind::Binary:
      if (bop != o.bop) return false;
      break;
    case ExprKind::Reach:
      if (name != o.name) return false;
      break;
    default:
      break;
  }
  return kids == o.kids;
}

Statement Statement::assign(std::string v, Expr e) {
  Statement s;
  s.kind = StmtKind::VarAssign;
  s.var = std::move(v);
  s.value = std::move(e);
  return s;
}
Statement Statement::fieldAssign(Expr base, std::string f, Expr e) {
  Statement s;
  s.kind = StmtKind::FieldAssign;
  s.lhsBase = std::move(base);
  s.field = std::move(f);
  s.value = std::move(e);
  return s;
}
Statement Statement::ifStmt(Expr c, std::vector<Statement> t, std::vector<Statement> e) {
  Statement s;
  s.kind = StmtKind::If;
  s.cond = std::move(c);
  s.thenBlock = std::move(t);
  s.elseBlock = std::move(e);
  return s;
}
Statement Statement::whileStmt(Expr c, std::vector<Statement> b) {
  Statement s;
  s.kind = StmtKind::While;
  s.cond = std::move(c);
  s.body = std::move(b);
  return s;
}
Statement Statement::ret(std::optional<Expr> e) {
  Statement s;
  s.kind = StmtKind::Return;
  if (e) {
    s.value = std::move(*e);
    s.hasValue = true;
  }
  return s;
}
Statement Statement::newStmt(std::string v, std::string record) {
  Statement s;
  s.kind = StmtKind::New;
  s.var = std::move(v);
  s.recordName = std::move(record);
  return s;
}
Statement Statement::skip() { return Statement{}; }

bool Statement::operator==(const Statement& o) const {
  if (kind != o.kind || id != o.id || mutGenLimit != o.mutGenLimit) return false;
  switch (kind) {
    case StmtKind::VarAssign:
      return var == o.var && value == o.value;
    case StmtKind::FieldAssign:
      return lhsBase == o.lhsBase && field == o.field && value == o.value;
    case StmtKind::If:
      return cond == o.cond && thenBlock == o.thenBlock && elseBlock == o.elseBlock;
    case StmtKind::While:
      return cond == o.cond && body == o.body;
    case StmtKind::Return:
      return hasValue == o.hasValue && (!hasValue || value == o.value);
    case StmtKind::New:
      return var == o.var && recordName == o.recordName;
    case StmtKind::Skip:
      return true;
  }
  return false;
}

bool Contract::operator==(const Contract& o) const {
  return requiresClause == o.requiresClause && ensuresClause == o.ensuresClause &&
         invariantClause == o.invariantClause;
}

bool Method::operator==(const Method& o) const {
  return name == o.name && receiver == o.receiver && params == o.params &&
         returnType == o.returnType && contract == o.contract && locals == o.locals &&
         body == o.body;
}

namespace {

template <typename S>
void walk(std::vector<S*>& out, S& stmt) {
  out.push_back(&stmt);
  for (auto& k : stmt.thenBlock) walk(out, k);
  for (auto& k : stmt.elseBlock) walk(out, k);
  for (auto& k : stmt.body) walk(out, k);
}

}  // namespace

std::vector<const Statement*> Method::allStatements() const {
  std::vector<const Statement*> out;
  for (auto& s : body) walk(out, s);
  return out;
}

std::vector<Statement*> Method::allStatements() {
  std::vector<Statement*> out;
  for (auto& s : body) walk(out, s);
  return out;
}

const Statement* Method::findStatement(int id) const {
  for (auto* s : allStatements())
    if (s->id == id) return s;
  return nullptr;
}

Statement* Method::findStatement(int id) {
  for (auto* s : allStatements())
    if (s->id == id) return s;
  return nullptr;
}

std::vector<int> Method::mutableStatementIdsBottomUp() const {
  std::vector<int> ids;
  for (auto* s : allStatements())
    if (s->mutGenLimit > 0) ids.push_back(s->id);
  // Preorder visits statements top to bottom; the spec's S_1 is the *last*
  // mutable statement, so reverse.
  std::reverse(ids.begin(), ids.end());
  return ids;
}

const Param* RecordDecl::findField(const std::string& f) const {
  for (auto& p : fields)
    if (p.name == f) return &p;
  return nullptr;
}

const RecordDecl* Program::findRecord(const std::string& name) const {
  for (auto& r : records)
    if (r.name == name) return &r;
  return nullptr;
}

const Method* Program::findMethod(const std::string& name) const {
  for (auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

Method* Program::findMethod(const std::string& name) {
  for (auto& m : methods)
    if (m.name == name) return &m;
  return nullptr;
}

namespace {

void keyExpr(std::ostringstream& os, const Expr& e) {
  switch (e.kind) {
    case ExprKind::IntLit: os << "i" << e.intVal; break;
    case ExprKind::BoolLit: os << (e.intVal ? "true" : "false"); break;
    case ExprKind::Null: os << "null"; break;
    case ExprKind::Var: os << "v:" << e.name; break;
    case ExprKind::Nav:
      os << "n:" << e.name;
      for (auto& f : e.fields) os << "." << f;
      break;
    case ExprKind::Unary:
      os << "(" << unOpToken(e.uop) << " ";
      keyExpr(os, e.kids[0]);
      os << ")";
      break;
    case ExprKind::Binary:
      os << "(" << binOpToken(e.bop) << " ";
      keyExpr(os, e.kids[0]);
      os << " ";
      keyExpr(os, e.kids[1]);
      os << ")";
      break;
    case ExprKind::Old:
      os << "(old ";
      keyExpr(os, e.kids[0]);
      os << ")";
      break;
    case ExprKind::Result: os << "result"; break;
    case ExprKind::Reach:
      os << "(reach ";
      keyExpr(os, e.kids[0]);
      os << " " << e.name << " ";
      keyExpr(os, e.kids[1]);
      os << ")";
      break;
    case ExprKind::FreshRef: os << "$" << e.intVal; break;
  }
}

void keyStmt(std::ostringstream& os, const Statement& s) {
  switch (s.kind) {
    case StmtKind::VarAssign:
      os << "(= " << s.var << " ";
      keyExpr(os, s.value);
      os << ")";
      break;
    case StmtKind::FieldAssign:
      os << "(f= ";
      keyExpr(os, s.lhsBase);
      os << " " << s.field << " ";
      keyExpr(os, s.value);
      os << ")";
      break;
    case StmtKind::If:
      os << "(if ";
      keyExpr(os, s.cond);
      os << " [";
      for (auto& k : s.thenBlock) keyStmt(os, k);
      os << "][";
      for (auto& k : s.elseBlock) keyStmt(os, k);
      os << "])";
      break;
    case StmtKind::While:
      os << "(while ";
      keyExpr(os, s.cond);
      os << " [";
      for (auto& k : s.body) keyStmt(os, k);
      os << "])";
      break;
    case StmtKind::Return:
      os << "(ret";
      if (s.hasValue) {
        os << " ";
        keyExpr(os, s.value);
      }
      os << ")";
      break;
    case StmtKind::New: os << "(new " << s.var << " " << s.recordName << ")"; break;
    case StmtKind::Skip: os << "(skip)"; break;
  }
}

}  // namespace

std::string canonicalKey(const Expr& e) {
  std::ostringstream os;
  keyExpr(os, e);
  return os.str();
}

std::string canonicalKey(const Statement& s) {
  std::ostringstream os;
  keyStmt(os, s);
  return os.str();
}

std::string canonicalKey(const Method& m) {
  std::ostringstream os;
  os << "method " << m.name << "(";
  if (m.receiver) os << "this:" << m.receiver->type.str() << ";";
  for (auto& p : m.params) os << p.name << ":" << p.type.str() << ";";
  os << "):" << m.returnType.str() << " req ";
  keyExpr(os, m.contract.requiresClause);
  os << " ens ";
  keyExpr(os, m.contract.ensuresClause);
  os << " inv ";
  keyExpr(os, m.contract.invariantClause);
  os << " locals ";
  for (auto& l : m.locals) os << l.name << ":" << l.type.str() << ";";
  os << " body ";
  for (auto& s : m.body) keyStmt(os, s);
  return os.str();
}

uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace stitch
