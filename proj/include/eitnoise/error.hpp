#pragma once

#include <stdexcept>
#include <string>

namespace eit {

enum class ErrorKind {
  InvalidParams,
  NoConvergence,
  DegenerateSteadyState,
  DivisionDegenerate,
  DegenerateDenominator,
  NoRoot,
  GridMismatch,
  StepUnderflow,
  DegenerateConditioning,
  Config,
};

const char* to_string(ErrorKind kind);

// Every failure raised by the library carries a kind so callers (the CLI in
// particular) can map it onto an exit status without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace eit
