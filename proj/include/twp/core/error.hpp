#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace twp {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ChartMismatch : public Error {
 public:
  using Error::Error;
};

class DegreeError : public Error {
 public:
  using Error::Error;
};

class KindError : public Error {
 public:
  using Error::Error;
};

class NotRepresentable : public Error {
 public:
  using Error::Error;
};

class DivisionByZero : public Error {
 public:
  using Error::Error;
};

class ValidationError : public Error {
 public:
  using Error::Error;
};

// Raised when a matrix that must be invertible is not; carries a sample point where it fails.
class DegeneracyError : public Error {
 public:
  DegeneracyError(const std::string& what, std::vector<double> witness)
      : Error(what), witness_(std::move(witness)) {}
  const std::vector<double>& witness() const { return witness_; }

 private:
  std::vector<double> witness_;
};

// Raised by integrators when a trajectory leaves its chart.
class DomainEscape : public Error {
 public:
  DomainEscape(const std::string& what, std::vector<double> exit_point, double time)
      : Error(what), exit_point_(std::move(exit_point)), time_(time) {}
  const std::vector<double>& exit_point() const { return exit_point_; }
  double time() const { return time_; }

 private:
  std::vector<double> exit_point_;
  double time_;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

}  // namespace twp
