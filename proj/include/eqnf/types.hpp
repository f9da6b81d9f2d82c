#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>

namespace eqnf {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

enum class ErrorCode {
  SingularInput,
  NoConvergence,
  NotUnipotent,
  DimensionMismatch,
  NotClosed,
  BadCharacter,
  NonInvertibleLinearPart,
  NotEquivariant,
  NotSemisimple,
  NoRealLogarithm,
  CkSingular,
  SplitFailure,
  InvariantViolation,
  NotInU,
  InverseNewtonFailed,
  SlopeTestFailed,
  ParseError,
};

const char* to_string(ErrorCode code);

/// Failure of a numerical or structural precondition. `value` carries the
/// offending residual, measured slope or degree when one is meaningful.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what, double value = 0.0)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code),
        value_(value) {}

  ErrorCode code() const noexcept { return code_; }
  double value() const noexcept { return value_; }

 private:
  ErrorCode code_;
  double value_;
};

inline const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::SingularInput: return "SingularInput";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::NotUnipotent: return "NotUnipotent";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotClosed: return "NotClosed";
    case ErrorCode::BadCharacter: return "BadCharacter";
    case ErrorCode::NonInvertibleLinearPart: return "NonInvertibleLinearPart";
    case ErrorCode::NotEquivariant: return "NotEquivariant";
    case ErrorCode::NotSemisimple: return "NotSemisimple";
    case ErrorCode::NoRealLogarithm: return "NoRealLogarithm";
    case ErrorCode::CkSingular: return "CkSingular";
    case ErrorCode::SplitFailure: return "SplitFailure";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::NotInU: return "NotInU";
    case ErrorCode::InverseNewtonFailed: return "InverseNewtonFailed";
    case ErrorCode::SlopeTestFailed: return "SlopeTestFailed";
    case ErrorCode::ParseError: return "ParseError";
  }
  return "Unknown";
}

inline void require_square(const Matrix& a, const char* what) {
  if (a.rows() != a.cols() || a.rows() == 0) {
    throw Error(ErrorCode::DimensionMismatch, std::string(what) + " must be a non-empty square matrix");
  }
}

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* what) {
  if (a != b) {
    throw Error(ErrorCode::DimensionMismatch,
                std::string(what) + ": " + std::to_string(a) + " vs " + std::to_string(b));
  }
}

}  // namespace eqnf
