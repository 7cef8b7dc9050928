#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>

namespace symspace {

// Every failure the toolkit reports. The CLI maps each code to a distinct
// nonzero exit status (see exit_code()).
enum class ErrorCode {
  InvalidArgument,
  ParseError,
  NotSquare,
  SingularShift,
  NodeOnSpectrum,
  NotConverged,
  WeightPoleNearContour,
  TooCloseToContour,
  NotSymmetric,
  TrivialSplit,
  PencilFullRank,
  ZeroVector,
  SingularOperator,
  NoConvergence,
  ResidualTooLarge,
  IoError,
};

std::string_view error_name(ErrorCode code);
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// λI − A failed the pivot test at `shift`.
class SingularShiftError : public Error {
 public:
  SingularShiftError(std::complex<double> shift, double pivot, const std::string& what,
                     ErrorCode code = ErrorCode::SingularShift)
      : Error(code, what), shift_(shift), pivot_(pivot) {}

  std::complex<double> shift() const noexcept { return shift_; }
  double pivot() const noexcept { return pivot_; }

 private:
  std::complex<double> shift_;
  double pivot_;
};

// Carries the last measured quantity (residual, node count) that failed a check.
class ResidualError : public Error {
 public:
  ResidualError(ErrorCode code, double residual, const std::string& what)
      : Error(code, what), residual_(residual) {}

  double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

}  // namespace symspace
