#pragma once

#include "stitch/ast.hpp"
#include "stitch/diagnostics.hpp"

namespace stitch {

// Checks the whole program and annotates every Expr with its type.
// Throws TypeError on the first problem. Enforces, among the usual rules:
//   - record/field/method/variable name validity and uniqueness,
//   - navigation only through Ref-typed fields,
//   - \result only in ensures (and only for non-void methods),
//   - \old only in ensures; contracts mention params/this/fields only,
//   - assignments to locals and params (never to `this`),
//   - non-void methods return on every control path (structural check).
void typecheck(Program& p);

// Typechecks a single method against already-checked record declarations.
void typecheckMethod(const Program& p, Method& m);

}  // namespace stitch
