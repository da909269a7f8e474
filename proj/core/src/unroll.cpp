#include "stitch/unroll.hpp"

namespace stitch {

namespace {

class Unroller {
 public:
  Unroller(UnrolledMethod& out, int bound) : out_(out), bound_(bound) {}

  std::vector<UnrolledStmt> block(const std::vector<Statement>& stmts) {
    std::vector<UnrolledStmt> res;
    for (auto& s : stmts) emit(res, s);
    return res;
  }

 private:
  int nextReplica(int id) { return out_.replicaCount[id]++; }

  void emit(std::vector<UnrolledStmt>& res, const Statement& s) {
    UnrolledStmt u;
    u.originId = s.id;
    switch (s.kind) {
      case StmtKind::VarAssign:
        u.kind = UnrolledStmt::Kind::Assign;
        u.var = s.var;
        u.value = s.value;
        break;
      case StmtKind::FieldAssign:
        u.kind = UnrolledStmt::Kind::FieldAssign;
        u.lhsBase = s.lhsBase;
        u.field = s.field;
        u.value = s.value;
        break;
      case StmtKind::Return:
        u.kind = UnrolledStmt::Kind::Return;
        u.hasValue = s.hasValue;
        if (s.hasValue) u.value = s.value;
        break;
      case StmtKind::New:
        u.kind = UnrolledStmt::Kind::New;
        u.var = s.var;
        u.recordName = s.recordName;
        break;
      case StmtKind::Skip: u.kind = UnrolledStmt::Kind::Skip; break;
      case StmtKind::If:
        u.kind = UnrolledStmt::Kind::If;
        u.cond = s.cond;
        u.replica = nextReplica(s.id);
        u.thenB = block(s.thenBlock);
        u.elseB = block(s.elseBlock);
        res.push_back(std::move(u));
        return;
      case StmtKind::While: {
        emitWhile(res, s, bound_);
        return;
      }
    }
    u.replica = nextReplica(s.id);
    res.push_back(std::move(u));
  }

  void emitWhile(std::vector<UnrolledStmt>& res, const Statement& w, int remaining) {
    if (remaining == 0) {
      UnrolledStmt trap;
      trap.kind = UnrolledStmt::Kind::ScopeCheck;
      trap.originId = w.id;
      trap.cond = w.cond;
      trap.replica = nextReplica(w.id);
      res.push_back(std::move(trap));
      return;
    }
    UnrolledStmt guard;
    guard.kind = UnrolledStmt::Kind::If;
    guard.originId = w.id;
    guard.cond = w.cond;
    guard.replica = nextReplica(w.id);
    guard.thenB = block(w.body);
    emitWhile(guard.thenB, w, remaining - 1);
    res.push_back(std::move(guard));
  }

  UnrolledMethod& out_;
  int bound_;
};

template <typename U, typename S>
void walkU(std::vector<S*>& acc, U& s) {
  acc.push_back(&s);
  for (auto& k : s.thenB) walkU(acc, k);
  for (auto& k : s.elseB) walkU(acc, k);
}

}  // namespace

UnrolledMethod unroll(const Method& m, const Scope& s) {
  UnrolledMethod u;
  u.origin = &m;
  u.unrollBound = s.unrollBound;
  Unroller ur(u, s.unrollBound);
  u.body = ur.block(m.body);
  return u;
}

std::vector<const UnrolledStmt*> allUnrolled(const UnrolledMethod& u) {
  std::vector<const UnrolledStmt*> out;
  for (auto& s : u.body) walkU(out, s);
  return out;
}

std::vector<UnrolledStmt*> allUnrolled(UnrolledMethod& u) {
  std::vector<UnrolledStmt*> out;
  for (auto& s : u.body) walkU(out, s);
  return out;
}

}  // namespace stitch
