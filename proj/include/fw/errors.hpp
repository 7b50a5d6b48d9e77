#ifndef FW_ERRORS_HPP
#define FW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace fw {

// Bad argument values (usage errors): radii, exponents, horizons, etc.
class InvalidParameterError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A step-size rule whose g(t) left its admissible domain [2, inf).
class InvalidScheduleError : public InvalidParameterError {
 public:
  using InvalidParameterError::InvalidParameterError;
};

// Shape mismatch between operands.
class DimensionError : public InvalidParameterError {
 public:
  using InvalidParameterError::InvalidParameterError;
};

// Least-squares matrix is numerically rank deficient.
class RankDeficientError : public std::runtime_error {
 public:
  RankDeficientError(const std::string& what, long estimated_rank)
      : std::runtime_error(what), estimated_rank_(estimated_rank) {}
  long estimated_rank() const { return estimated_rank_; }

 private:
  long estimated_rank_;
};

// Power iteration asked to factor the zero matrix.
class ZeroMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Iterative routine failed to converge within its budget.
class ConvergenceError : public std::runtime_error {
 public:
  ConvergenceError(const std::string& what, double last_residual)
      : std::runtime_error(what), last_residual_(last_residual) {}
  double last_residual() const { return last_residual_; }

 private:
  double last_residual_;
};

// Internal cross-checks (e.g. the objective-reduction identity) disagree
// beyond tolerance: value/gradient plumbing is inconsistent.
class NumericalInconsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Every growth-certification sample was stationary.
class DegenerateInstanceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Too few usable samples for a statistical fit.
class InsufficientDataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// File I/O and parse failures for dataset/config ingestion.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fw

#endif  // FW_ERRORS_HPP
