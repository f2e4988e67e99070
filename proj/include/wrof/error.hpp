#pragma once

#include <stdexcept>
#include <string>

namespace wrof {

enum class Errc {
  EmptyMeasure,
  NonFiniteCoordinate,
  NegativeWeight,
  DimensionMismatch,
  AllZeroImage,
  NonPositiveLambda,
  FewerThanTwoPoints,
  SolverFailure,
  CostMismatch,
  BudgetExceeded,
  EmptyGrid,
  AtomBudgetExceeded,
  EmptySuite,
  ParseError,
};

const char* errc_name(Errc code);

/** \brief Library error carrying a machine-readable code. */
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

}  // namespace wrof
