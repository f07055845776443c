#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace coupled {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
  /// Short machine-readable category, used in CLI diagnostics.
  virtual const char* category() const noexcept { return "error"; }
};

class DimensionError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "dimension"; }
};

class SymmetryError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "symmetry"; }
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "convergence"; }
};

/// A function evaluated during differentiation or integration returned a
/// non-finite value.
class EvaluationError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "evaluation"; }
};

/// A scalar estimate (eigenvalue, singular value, vector norm) fell below the
/// configured floor.
class GuardedScalarError : public Error {
 public:
  GuardedScalarError(std::string name, double value, double floor);
  const std::string& name() const noexcept { return name_; }
  double value() const noexcept { return value_; }
  const char* category() const noexcept override { return "guarded_scalar"; }

 private:
  std::string name_;
  double value_;
};

class DegeneracyError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "degeneracy"; }
};

class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double condition)
      : Error(what), condition_(condition) {}
  double condition() const noexcept { return condition_; }
  const char* category() const noexcept override { return "singularity"; }

 private:
  double condition_;
};

class UnsupportedError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "unsupported"; }
};

class PreconditionError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "precondition"; }
};

class ParseError : public Error {
 public:
  using Error::Error;
  const char* category() const noexcept override { return "parse"; }
};

}  // namespace coupled
