#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace torembed {

enum class ErrorKind {
  GuardExceeded,
  Degenerate,
  DimensionMismatch,
  UnitaryClassMismatch,
  MultipleTrivial,
  PatternBudget,
  ScanExhausted,
  ShaObstruction,
  NotBalanced,
  ReciprocityViolation,
  OddRamification,
  DegreeMismatch,
  CaseMismatch,
  FactorObstruction,
  OrientationRequired,
  Infeasible,
  ParityViolation,
  ZeroScale,
  Schema,
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace torembed
