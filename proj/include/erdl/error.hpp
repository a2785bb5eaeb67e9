#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "erdl/source.hpp"

namespace erdl {

enum class ErrorKind {
  Syntax,        // token or grammar violation
  Reference,     // unknown entity name in relationship/supertype position
  Cycle,         // Is-A cycle
  Duplicate,     // two declarations competing for one name
  JsonFormat,    // malformed or invariant-violating JSON model
  Precondition,  // operation invoked on a model that fails its gate
  UnknownEntity, // lookup precondition violated
  Arity,         // wrong participant count for a binary-only operation
  Io,            // file could not be read or written
};

inline const char* errorKindName(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Syntax: return "SyntaxError";
  case ErrorKind::Reference: return "ReferenceError";
  case ErrorKind::Cycle: return "CycleError";
  case ErrorKind::Duplicate: return "DuplicateError";
  case ErrorKind::JsonFormat: return "JsonFormatError";
  case ErrorKind::Precondition: return "PreconditionError";
  case ErrorKind::UnknownEntity: return "UnknownEntityError";
  case ErrorKind::Arity: return "ArityError";
  case ErrorKind::Io: return "IoError";
  }
  return "Error";
}

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, std::string message, std::optional<SourceSpan> span = std::nullopt)
      : std::runtime_error(std::move(message)), kind_(kind), span_(std::move(span)) {}

  ErrorKind kind() const { return kind_; }
  const std::optional<SourceSpan>& span() const { return span_; }

private:
  ErrorKind kind_;
  std::optional<SourceSpan> span_;
};

} // namespace erdl
