#pragma once

#include <string>

#include "stitch/ast.hpp"
#include "stitch/diagnostics.hpp"

namespace stitch {

// Parses `.imp` source text. Throws ParseError with line/column on malformed
// input. `//mutGenLimit k` trailing annotations attach budget k to the
// preceding statement; unannotated statements get budget 0. Statement ids are
// assigned in preorder per method, starting at 1.
Program parse(const std::string& source);

// Convenience: parse followed by typecheck (declared in typecheck.hpp).
Program parseAndCheck(const std::string& source);

}  // namespace stitch
