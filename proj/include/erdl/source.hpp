#pragma once

#include <compare>
#include <string>

namespace erdl {

/// A half-open region of input text, 1-based line and column.
struct SourceSpan {
  std::string file;
  int line = 1;
  int column = 1;
  int length = 0;

  bool operator==(const SourceSpan&) const = default;
};

} // namespace erdl
