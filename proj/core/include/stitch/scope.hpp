#pragma once

#include "stitch/diagnostics.hpp"

namespace stitch {

// Analysis bounds: objects per record type, signed integer bit width,
// loop-unroll bound. Executions needing more loop iterations or more objects
// fall outside the bounded-correctness universe.
struct Scope {
  int objectsPerRecord = 3;
  int intWidth = 8;
  int unrollBound = 3;

  void validate() const {
    if (objectsPerRecord <= 0 || intWidth <= 0 || unrollBound <= 0)
      throw InternalError("scope components must be positive");
    if (intWidth > 16) throw InternalError("intWidth must be <= 16");
  }
};

}  // namespace stitch
