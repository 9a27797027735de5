#ifndef WHIPGEO_ERRORS_HPP
#define WHIPGEO_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace whip {

enum class ErrorKind {
  OddNodeCount,
  GridTooSmall,
  GridMismatch,
  StencilOrder,
  DegenerateImmersion,
  SolveFailure,
  FlatCurve,
  CflViolation,
  DriftBudgetExceeded,
  IncompatibleInitialData,
  ParallelSection,
  LengthMismatch,
  ReconstructionDrift,
  InvalidArgument,
  ConfigInvalid,
};

std::string_view to_string(ErrorKind kind);

class WhipError : public std::runtime_error {
 public:
  WhipError(ErrorKind kind, const std::string& what);
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string& what);

}  // namespace whip

#endif
