#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace stitch {

enum class TypeKind { Int, Bool, Ref, Void };

struct Type {
  TypeKind kind = TypeKind::Void;
  std::string record;  // record name when kind == Ref

  static Type intType() { return {TypeKind::Int, {}}; }
  static Type boolType() { return {TypeKind::Bool, {}}; }
  static Type refType(std::string r) { return {TypeKind::Ref, std::move(r)}; }
  static Type voidType() { return {TypeKind::Void, {}}; }

  bool isInt() const { return kind == TypeKind::Int; }
  bool isBool() const { return kind == TypeKind::Bool; }
  bool isRef() const { return kind == TypeKind::Ref; }
  bool isVoid() const { return kind == TypeKind::Void; }

  bool operator==(const Type& o) const { return kind == o.kind && record == o.record; }
  bool operator!=(const Type& o) const { return !(*this == o); }
  std::string str() const;
};

enum class ExprKind {
  IntLit,
  BoolLit,
  Null,
  Var,
  Nav,     // base variable plus a nonempty field chain: v.f1.f2...fk
  Unary,
  Binary,
  Old,     // \old(e), ensures only
  Result,  // \result, ensures only
  Reach,   // reach(x, f, y): y reachable from x via zero or more f steps
  FreshRef // internal: reference into a variabilization ledger (never parsed)
};

enum class UnOp { Neg, Not };
enum class BinOp { Add, Sub, Mul, Div, Mod, Lt, Le, Gt, Ge, Eq, Ne, And, Or, Xor };

const char* binOpToken(BinOp op);
const char* unOpToken(UnOp op);
bool isArith(BinOp op);
bool isRelational(BinOp op);  // < <= > >=
bool isEquality(BinOp op);    // == !=
bool isConnector(BinOp op);   // && || ^

struct Expr {
  ExprKind kind = ExprKind::Null;
  Type type;                        // filled in by the typechecker
  int64_t intVal = 0;               // IntLit value (>= 0 in source form), BoolLit 0/1, FreshRef ledger index
  std::string name;                 // Var name, Nav base variable, Reach field
  std::vector<std::string> fields;  // Nav chain (nonempty)
  UnOp uop = UnOp::Neg;
  BinOp bop = BinOp::Add;
  std::vector<Expr> kids;  // Unary/Old: 1, Binary: 2, Reach: [x, y]

  static Expr intLit(int64_t v);
  static Expr boolLit(bool b);
  static Expr nullLit();
  static Expr var(std::string n);
  static Expr nav(std::string base, std::vector<std::string> fs);
  static Expr unary(UnOp op, Expr e);
  static Expr binary(BinOp op, Expr l, Expr r);
  static Expr oldOf(Expr e);
  static Expr resultRef();
  static Expr reach(Expr x, std::string field, Expr y);
  static Expr fresh(int ledgerIndex, Type t);

  bool operator==(const Expr& o) const;
  bool operator!=(const Expr& o) const { return !(*this == o); }
};

enum class StmtKind { VarAssign, FieldAssign, If, While, Return, New, Skip };

struct Statement {
  StmtKind kind = StmtKind::Skip;
  int id = 0;          // unique within a method, assigned in parse (preorder) order
  int mutGenLimit = 0; // //mutGenLimit k annotation; 0 when absent

  std::string var;        // VarAssign/New target
  Expr lhsBase;           // FieldAssign: navigation up to (not including) the written field
  std::string field;      // FieldAssign written field
  Expr value;             // VarAssign/FieldAssign rhs, Return value
  bool hasValue = false;  // Return with expression
  Expr cond;              // If/While condition
  std::string recordName; // New
  std::vector<Statement> thenBlock;
  std::vector<Statement> elseBlock;
  std::vector<Statement> body;  // While

  static Statement assign(std::string v, Expr e);
  static Statement fieldAssign(Expr base, std::string f, Expr e);
  static Statement ifStmt(Expr c, std::vector<Statement> t, std::vector<Statement> e);
  static Statement whileStmt(Expr c, std::vector<Statement> b);
  static Statement ret(std::optional<Expr> e);
  static Statement newStmt(std::string v, std::string record);
  static Statement skip();

  bool operator==(const Statement& o) const;
  bool operator!=(const Statement& o) const { return !(*this == o); }
};

struct Contract {
  Expr requiresClause = Expr::boolLit(true);
  Expr ensuresClause = Expr::boolLit(true);
  Expr invariantClause = Expr::boolLit(true);

  bool operator==(const Contract& o) const;
};

struct Param {
  std::string name;
  Type type;
  bool operator==(const Param& o) const { return name == o.name && type == o.type; }
};

struct SrcPos {
  int line = 0;
  int col = 0;
};

struct Method {
  std::string name;
  std::optional<Param> receiver;  // parameter named `this`, always Ref-typed
  std::vector<Param> params;      // non-receiver parameters
  Type returnType = Type::voidType();
  Contract contract;
  std::vector<Param> locals;
  std::vector<Statement> body;
  std::map<int, SrcPos> spans;  // statement id -> source position

  bool operator==(const Method& o) const;
  const Statement* findStatement(int id) const;
  Statement* findStatement(int id);
  // Every statement in the body, preorder.
  std::vector<const Statement*> allStatements() const;
  std::vector<Statement*> allStatements();
  // Statements with mutGenLimit > 0, ordered from the bottom of the method
  // upwards (position 0 holds the last mutable statement).
  std::vector<int> mutableStatementIdsBottomUp() const;
};

struct RecordDecl {
  std::string name;
  std::vector<Param> fields;

  const Param* findField(const std::string& f) const;
  bool operator==(const RecordDecl& o) const { return name == o.name && fields == o.fields; }
};

struct Program {
  std::vector<RecordDecl> records;
  std::vector<Method> methods;

  const RecordDecl* findRecord(const std::string& name) const;
  const Method* findMethod(const std::string& name) const;
  Method* findMethod(const std::string& name);
  bool operator==(const Program& o) const { return records == o.records && methods == o.methods; }
};

// Canonical structural serialization. Statement ids, budgets and source spans
// are excluded; everything else (names, literals, operators, types of
// declarations) is covered. Used for mutant hashing and duplicate detection.
std::string canonicalKey(const Expr& e);
std::string canonicalKey(const Statement& s);
std::string canonicalKey(const Method& m);

uint64_t fnv1a64(const std::string& s);

}  // namespace stitch
