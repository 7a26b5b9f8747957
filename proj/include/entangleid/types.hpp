#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace entangleid {

inline constexpr const char* version_string = "0.1.0";

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
using MatrixXc = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic>;

using Index = Eigen::Index;

// Every failure mode raised by the library. CLI maps all of these to exit
// code 3; anything usage-shaped (bad flags, unknown command) never reaches
// this type.
enum class Errc {
  EmptyInput,
  NegativeWeight,
  ZeroSum,
  NotNormalized,
  DimensionMismatch,
  DimensionTooSmall,
  NotMajorized,
  AlreadyConvertible,
  IndexOutOfRange,
  DegenerateTarget,
  NoConvergence,
  TooLarge,
  ZeroAtPositiveTarget,
  StrategyKindMismatch,
  ParseError,
  InvariantViolation,
  DomainError,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::EmptyInput: return "EmptyInput";
    case Errc::NegativeWeight: return "NegativeWeight";
    case Errc::ZeroSum: return "ZeroSum";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::DimensionTooSmall: return "DimensionTooSmall";
    case Errc::NotMajorized: return "NotMajorized";
    case Errc::AlreadyConvertible: return "AlreadyConvertible";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::DegenerateTarget: return "DegenerateTarget";
    case Errc::NoConvergence: return "NoConvergence";
    case Errc::TooLarge: return "TooLarge";
    case Errc::ZeroAtPositiveTarget: return "ZeroAtPositiveTarget";
    case Errc::StrategyKindMismatch: return "StrategyKindMismatch";
    case Errc::ParseError: return "ParseError";
    case Errc::InvariantViolation: return "InvariantViolation";
    case Errc::DomainError: return "DomainError";
  }
  return "UnknownError";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

// Comparison slack used across the library.  eq_tol settles equality of
// spectra and of individual probabilities, majorization_tol is the one-sided
// slack granted to prefix-sum inequalities, normalization_tol is how far an
// input may stray from unit total weight before it is rejected.
template <typename Scalar>
struct ToleranceConfigT {
  Scalar eq_tol = Scalar(1e-12);
  Scalar majorization_tol = Scalar(1e-12);
  Scalar normalization_tol = Scalar(1e-9);

  void validate() const {
    if (!(eq_tol > Scalar(0)) || !(majorization_tol > Scalar(0)) ||
        !(normalization_tol > Scalar(0)))
      throw Error(Errc::DomainError, "tolerances must be strictly positive");
  }
};

using ToleranceConfig = ToleranceConfigT<double>;

}  // namespace entangleid
