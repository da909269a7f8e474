#pragma once

#include <string>

#include "stitch/cnf.hpp"
#include "stitch/diagnostics.hpp"

namespace stitch {

struct DimacsError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Standard DIMACS CNF, no comments, one clause per line. Group tags are not
// part of the format; exportGroupMapJson carries them in a sidecar.
std::string exportDimacs(const Cnf& f);
Cnf importDimacs(const std::string& text);

// Sidecar JSON: {"clauses": [group-of-clause-0, group-of-clause-1, ...]} with
// -1 for untagged clauses.
std::string exportGroupMapJson(const Cnf& f);

}  // namespace stitch
