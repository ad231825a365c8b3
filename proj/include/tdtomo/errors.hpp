#pragma once

#include <stdexcept>
#include <string>

namespace tdtomo {

// Base class for domain failures. The CLI maps these to exit code 1,
// while ConfigError (bad input files / flags) maps to exit code 2.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

struct NotHermitian : Error {
  double residual;
  NotHermitian(const std::string& what, double r) : Error(what), residual(r) {}
};

struct NotPSD : Error {
  double min_eigenvalue;
  NotPSD(const std::string& what, double m) : Error(what), min_eigenvalue(m) {}
};

struct TraceNotOne : Error {
  double deviation;
  TraceNotOne(const std::string& what, double d) : Error(what), deviation(d) {}
};

// Carries the determinant (NaN when the system is not square) and the
// 2-norm condition number of the offending matrix.
struct SolvabilityError : Error {
  double determinant;
  double condition;
  SolvabilityError(const std::string& what, double det, double cond)
      : Error(what), determinant(det), condition(cond) {}
};

struct Underdetermined : Error {
  using Error::Error;
};

struct DegenerateProjection : Error {
  using Error::Error;
};

struct InvalidProbability : Error {
  double value;
  InvalidProbability(const std::string& what, double v) : Error(what), value(v) {}
};

struct DegenerateRates : Error {
  using Error::Error;
};

struct NotInformationallyComplete : Error {
  using Error::Error;
};

// Problems with user-supplied configuration or files; CLI exit code 2.
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace tdtomo
