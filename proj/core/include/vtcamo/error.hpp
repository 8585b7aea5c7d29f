// Copyright 2026 The vtcamo Authors
#ifndef VTCAMO_ERROR_HPP_
#define VTCAMO_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace vtcamo {

// Every domain failure raised by the library carries one of these kinds so
// callers (and the CLI's structured error output) can dispatch without
// parsing messages.
enum class ErrorKind {
  kInvalidParameter,
  kUnsupportedFunction,
  kMalformedConfig,
  kIndistinguishable,
  kSyntax,
  kUndefinedNet,
  kCycle,
  kArityMismatch,
  kDuplicateDefinition,
  kUnresolvedGate,
  kInvalidInput,
  kIncompatibleNetlists,
  kContentionCollapse,
  kDecoyUnavailable,
  kInvalidConfig,
  kAttackTooLarge,
  kDependency,
  kInvalidTemplate,
  kInsertion,
  kIo,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Parse failures additionally record where in the input they happened.
class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& what, int line, int column)
      : Error(ErrorKind::kSyntax, what), line_(line), column_(column) {}

  [[nodiscard]] int line() const noexcept { return line_; }
  [[nodiscard]] int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

}  // namespace vtcamo

#endif  // VTCAMO_ERROR_HPP_
