#include "fw/objectives.hpp"

#include <cmath>
#include <sstream>

#include "fw/errors.hpp"

namespace fw {

double huber(double x, double rho) {
  if (!(rho > 0.0)) throw InvalidParameterError("huber: rho must be > 0");
  const double a = std::abs(x);
  return a <= 1.0 ? 0.5 * x * x : rho * (a - 0.5);
}

double huber_derivative(double x, double rho) {
  if (!(rho > 0.0)) throw InvalidParameterError("huber_derivative: rho must be > 0");
  if (std::abs(x) <= 1.0) return x;
  return x > 0.0 ? rho : -rho;
}

void Objective::check_dim(const Vector& x, const char* where) const {
  if (x.size() != dim()) {
    std::ostringstream msg;
    msg << where << ": point has " << x.size() << " entries, objective expects "
        << dim();
    throw DimensionError(msg.str());
  }
}

double Objective::bregman(const Vector& y, const Vector& x) const {
  check_dim(y, "Objective::bregman");
  check_dim(x, "Objective::bregman");
  return value(y) - value(x) - gradient(x).dot(y - x);
}

RegressionObjective::RegressionObjective(Matrix A, Vector y)
    : A_(std::move(A)), y_(std::move(y)) {
  if (A_.rows() != y_.size()) {
    throw DimensionError("RegressionObjective: rows(A) must equal dim(y)");
  }
  AtA_ = A_.transpose() * A_;
  Aty_ = A_.transpose() * y_;
}

double RegressionObjective::value(const Vector& x) const {
  check_dim(x, "RegressionObjective::value");
  return 0.5 * (A_ * x - y_).squaredNorm();
}

Vector RegressionObjective::gradient(const Vector& x) const {
  check_dim(x, "RegressionObjective::gradient");
  return AtA_ * x - Aty_;
}

double RegressionObjective::bregman(const Vector& y_pt, const Vector& x) const {
  check_dim(y_pt, "RegressionObjective::bregman");
  check_dim(x, "RegressionObjective::bregman");
  // D_f(y, x) = 1/2 ||A (y - x)||^2 exactly for the quadratic f.
  const Vector d = y_pt - x;
  return 0.5 * d.dot(AtA_ * d);
}

std::string RegressionObjective::describe() const {
  std::ostringstream s;
  s << "regression[" << A_.rows() << "x" << A_.cols() << "]";
  return s.str();
}

CompletionObjective::CompletionObjective(std::vector<Observation> observed,
                                         Index rows, Index cols, double rho)
    : observed_(std::move(observed)), rows_(rows), cols_(cols), rho_(rho) {
  if (observed_.empty()) {
    throw InvalidParameterError("CompletionObjective: observed set is empty");
  }
  if (!(rho_ > 0.0)) throw InvalidParameterError("CompletionObjective: rho must be > 0");
  for (const Observation& obs : observed_) {
    if (obs.i < 0 || obs.i >= rows_ || obs.j < 0 || obs.j >= cols_) {
      std::ostringstream msg;
      msg << "CompletionObjective: observation (" << obs.i << "," << obs.j
          << ") outside " << rows_ << "x" << cols_;
      throw InvalidParameterError(msg.str());
    }
  }
}

double CompletionObjective::value(const Vector& x) const {
  check_dim(x, "CompletionObjective::value");
  double sum = 0.0;
  for (const Observation& obs : observed_) {
    sum += huber(obs.value - x[obs.j * rows_ + obs.i], rho_);
  }
  return sum / double(observed_.size());
}

Vector CompletionObjective::gradient(const Vector& x) const {
  check_dim(x, "CompletionObjective::gradient");
  Vector grad = Vector::Zero(dim());
  const double inv = 1.0 / double(observed_.size());
  for (const Observation& obs : observed_) {
    const double residual = obs.value - x[obs.j * rows_ + obs.i];
    grad[obs.j * rows_ + obs.i] = -huber_derivative(residual, rho_) * inv;
  }
  return grad;
}

std::string CompletionObjective::describe() const {
  std::ostringstream s;
  s << "completion[" << rows_ << "x" << cols_ << ",|I|=" << observed_.size()
    << ",rho=" << rho_ << "]";
  return s.str();
}

QuadraticObjective::QuadraticObjective(Matrix Q, Vector b)
    : Q_(std::move(Q)), b_(std::move(b)) {
  if (Q_.rows() != Q_.cols() || Q_.rows() != b_.size()) {
    throw DimensionError("QuadraticObjective: Q must be square and match b");
  }
}

double QuadraticObjective::value(const Vector& x) const {
  check_dim(x, "QuadraticObjective::value");
  return 0.5 * x.dot(Q_ * x) + b_.dot(x);
}

Vector QuadraticObjective::gradient(const Vector& x) const {
  check_dim(x, "QuadraticObjective::gradient");
  return Q_ * x + b_;
}

double QuadraticObjective::bregman(const Vector& y_pt, const Vector& x) const {
  check_dim(y_pt, "QuadraticObjective::bregman");
  check_dim(x, "QuadraticObjective::bregman");
  const Vector d = y_pt - x;
  return 0.5 * d.dot(Q_ * d);
}

}  // namespace fw
