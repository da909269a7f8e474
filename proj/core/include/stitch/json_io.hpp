#pragma once

#include <string>

#include "stitch/ast.hpp"
#include "stitch/value.hpp"

namespace stitch {

// Declared in value.hpp; implemented here against nlohmann::json:
//   std::string canonicalInputJson(const Input&);
//   Input inputFromJson(const Program&, const Method&, const std::string&);

}  // namespace stitch
