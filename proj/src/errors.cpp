#include "knotflow/errors.hpp"

namespace knotflow {

std::string_view error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::MeanNotZero: return "MeanNotZero";
    case ErrorKind::DegenerateChord: return "DegenerateChord";
    case ErrorKind::NoConvergence: return "NoConvergence";
    case ErrorKind::ZeroVelocity: return "ZeroVelocity";
    case ErrorKind::InadmissibleParameters: return "InadmissibleParameters";
    case ErrorKind::InadmissibleExponent: return "InadmissibleExponent";
    case ErrorKind::InadmissibleKernel: return "InadmissibleKernel";
    case ErrorKind::ConstraintViolated: return "ConstraintViolated";
    case ErrorKind::SingularGram: return "SingularGram";
    case ErrorKind::StepUnderflow: return "StepUnderflow";
    case ErrorKind::NonRemovableSingularity: return "NonRemovableSingularity";
    case ErrorKind::ParameterOutOfRange: return "ParameterOutOfRange";
    case ErrorKind::SelfIntersection: return "SelfIntersection";
    case ErrorKind::ParseError: return "ParseError";
    case ErrorKind::IoError: return "IoError";
  }
  return "Unknown";
}

Error::Error(ErrorKind kind, const std::string& message)
    : std::runtime_error(std::string(error_name(kind)) + ": " + message), kind_(kind) {}

}  // namespace knotflow
