#pragma once

#include <stdexcept>
#include <string>

namespace stitch {

struct LangError : std::runtime_error {
  int line;
  int col;
  LangError(std::string msg, int line_, int col_)
      : std::runtime_error(std::to_string(line_) + ":" + std::to_string(col_) + ": " + msg),
        line(line_),
        col(col_) {}
};

struct ParseError : LangError {
  using LangError::LangError;
};

struct TypeError : LangError {
  using LangError::LangError;
};

// Internal invariant broken (encoder/solver disagreement, failed replay, ...).
struct InternalError : std::logic_error {
  using std::logic_error::logic_error;
};

}  // namespace stitch
