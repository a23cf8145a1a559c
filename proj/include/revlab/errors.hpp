#pragma once

#include <stdexcept>
#include <string>

namespace revlab {

enum class ErrorKind {
  kWarpVanishes,
  kNonFiniteCurvature,
  kBadParameter,
  kLeftDomain,
  kPoleHit,
  kZeroVector,
  kNoConnectionFound,
  kNoSolutionInSector,
  kMonotonicityViolation,
  kHorizonTooSmall,
  kTotalCurvatureNotAbovePi,
  kCoveringFailed,
  kGateFailed,
  kInput,
};

const char* to_string(ErrorKind kind);

// Base of every error raised by the library. The kind is what callers switch
// on; `value` carries the location (t*, s, ...) when one exists.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what, double value = 0.0)
      : std::runtime_error(what), kind_(kind), value_(value) {}

  ErrorKind kind() const noexcept { return kind_; }
  double value() const noexcept { return value_; }

 private:
  ErrorKind kind_;
  double value_;
};

class WarpVanishes : public Error {
 public:
  explicit WarpVanishes(double t_star);
  double t_star() const noexcept { return value(); }
};

class NonFiniteCurvature : public Error {
 public:
  explicit NonFiniteCurvature(double t);
};

class BadParameter : public Error {
 public:
  explicit BadParameter(const std::string& what)
      : Error(ErrorKind::kBadParameter, "BadParameter: " + what) {}
};

class LeftDomain : public Error {
 public:
  explicit LeftDomain(double s);
};

class PoleHit : public Error {
 public:
  explicit PoleHit(double s);
};

class ZeroVector : public Error {
 public:
  ZeroVector() : Error(ErrorKind::kZeroVector, "ZeroVector: tangent vector has zero length") {}
};

class NoConnectionFound : public Error {
 public:
  explicit NoConnectionFound(const std::string& what)
      : Error(ErrorKind::kNoConnectionFound, "NoConnectionFound: " + what) {}
};

class NoSolutionInSector : public Error {
 public:
  explicit NoSolutionInSector(const std::string& what)
      : Error(ErrorKind::kNoSolutionInSector, "NoSolutionInSector: " + what) {}
};

class MonotonicityViolation : public Error {
 public:
  explicit MonotonicityViolation(const std::string& what, double at)
      : Error(ErrorKind::kMonotonicityViolation, "MonotonicityViolation: " + what, at) {}
};

class HorizonTooSmall : public Error {
 public:
  explicit HorizonTooSmall(double s);
};

class TotalCurvatureNotAbovePi : public Error {
 public:
  explicit TotalCurvatureNotAbovePi(double c_minus_bound);
};

class CoveringFailed : public Error {
 public:
  explicit CoveringFailed(const std::string& what)
      : Error(ErrorKind::kCoveringFailed, "CoveringFailed: " + what) {}
};

class GateFailed : public Error {
 public:
  explicit GateFailed(const std::string& what) : Error(ErrorKind::kGateFailed, "GateFailed: " + what) {}
};

// Malformed input file or field; `what` names the file and field.
class InputError : public Error {
 public:
  explicit InputError(const std::string& what) : Error(ErrorKind::kInput, "InputError: " + what) {}
};

}  // namespace revlab
