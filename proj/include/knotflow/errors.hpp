#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace knotflow {

enum class ErrorKind {
  MeanNotZero,
  DegenerateChord,
  NoConvergence,
  ZeroVelocity,
  InadmissibleParameters,
  InadmissibleExponent,
  InadmissibleKernel,
  ConstraintViolated,
  SingularGram,
  StepUnderflow,
  NonRemovableSingularity,
  ParameterOutOfRange,
  SelfIntersection,
  ParseError,
  IoError,
};

std::string_view error_name(ErrorKind kind) noexcept;

// Every failure raised by the library carries a machine-readable kind; the CLI
// prints error_name(kind) so scripts can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message);

  ErrorKind kind() const noexcept { return kind_; }
  std::string_view name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace knotflow
