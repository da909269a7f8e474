#pragma once

#include <map>
#include <vector>

#include "stitch/ast.hpp"
#include "stitch/scope.hpp"

namespace stitch {

// Loop-free method body: every While becomes unrollBound guarded copies of
// its body plus a trailing ScopeCheck marking executions that would need more
// iterations. Every copy keeps its original statement id; replicas number the
// copies of one original statement in emission order.
struct UnrolledStmt {
  enum class Kind { Assign, FieldAssign, If, Return, New, Skip, ScopeCheck, AbstractWrite };

  Kind kind = Kind::Skip;
  int originId = 0;
  int replica = 0;

  std::string var;
  std::string field;
  std::string recordName;
  Expr lhsBase;
  Expr value;
  Expr cond;
  bool hasValue = false;
  std::vector<UnrolledStmt> thenB;
  std::vector<UnrolledStmt> elseB;

  // Variabilization: one fresh-valued write to one of several possible
  // targets, selected by a fresh selector (see prune.hpp).
  struct WriteForm {
    bool isField = false;
    std::string var;     // target variable (var form)
    std::string field;   // written field (field form)
    std::string record;  // record owning `field`
    int navLedger = -1;  // fresh ref navigated for the field form
    int valueLedger = -1;
  };
  std::vector<WriteForm> forms;
  int selectorLedger = -1;
};

struct UnrolledMethod {
  const Method* origin = nullptr;
  int unrollBound = 0;
  std::vector<UnrolledStmt> body;
  std::map<int, int> replicaCount;  // original statement id -> number of copies
};

UnrolledMethod unroll(const Method& m, const Scope& s);

// All statements of the unrolled body, preorder.
std::vector<const UnrolledStmt*> allUnrolled(const UnrolledMethod& u);
std::vector<UnrolledStmt*> allUnrolled(UnrolledMethod& u);

}  // namespace stitch
