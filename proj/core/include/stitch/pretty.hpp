#pragma once

#include <string>

#include "stitch/ast.hpp"

namespace stitch {

// Canonical source form. parse(prettyPrint(p)) is structurally equal to p,
// including mutGenLimit budgets; ids and spans are re-derived.
std::string prettyPrint(const Program& p);
std::string prettyPrint(const Method& m);
std::string prettyPrint(const Expr& e);
std::string prettyPrint(const Statement& s);  // single line / nested block form

}  // namespace stitch
