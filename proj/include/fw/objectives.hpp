#ifndef FW_OBJECTIVES_HPP
#define FW_OBJECTIVES_HPP

#include <string>
#include <vector>

#include "fw/linalg.hpp"

namespace fw {

/// Huber loss: x^2/2 on |x| <= 1, rho (|x| - 1/2) beyond. The default
/// rho = 1 is the only value for which the two branches meet.
double huber(double x, double rho = 1.0);
double huber_derivative(double x, double rho = 1.0);

/// Differentiable convex objective over flat points (matrix-shaped
/// objectives use column-major layout, matching the nuclear-ball LMO).
class Objective {
 public:
  virtual ~Objective() = default;
  virtual double value(const Vector& x) const = 0;
  virtual Vector gradient(const Vector& x) const = 0;
  /// Bregman divergence D_f(y, x) = f(y) - f(x) - <grad f(x), y - x>.
  /// Quadratic objectives override this with the exact curvature form.
  virtual double bregman(const Vector& y, const Vector& x) const;
  virtual Index dim() const = 0;
  virtual std::string describe() const = 0;

 protected:
  void check_dim(const Vector& x, const char* where) const;
};

/// f(x) = 1/2 ||A x - y||_2^2 with cached A^T A and A^T y.
class RegressionObjective final : public Objective {
 public:
  RegressionObjective(Matrix A, Vector y);
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double bregman(const Vector& y_pt, const Vector& x) const override;
  Index dim() const override { return A_.cols(); }
  std::string describe() const override;
  const Matrix& design() const { return A_; }
  const Vector& target() const { return y_; }

 private:
  Matrix A_;
  Vector y_;
  Matrix AtA_;
  Vector Aty_;
};

struct Observation {
  Index i;
  Index j;
  double value;
};

/// f(X) = (1/|I|) sum_{(i,j) in I} H(A_ij - X_ij) with H the Huber loss.
/// Gradient entries vanish outside the observed index set.
class CompletionObjective final : public Objective {
 public:
  CompletionObjective(std::vector<Observation> observed, Index rows, Index cols,
                      double rho = 1.0);
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  Index dim() const override { return rows_ * cols_; }
  std::string describe() const override;
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  const std::vector<Observation>& observed() const { return observed_; }

 private:
  std::vector<Observation> observed_;
  Index rows_, cols_;
  double rho_;
};

/// f(x) = 1/2 x^T Q x + b^T x for symmetric PSD Q. Test instrument.
class QuadraticObjective final : public Objective {
 public:
  QuadraticObjective(Matrix Q, Vector b);
  double value(const Vector& x) const override;
  Vector gradient(const Vector& x) const override;
  double bregman(const Vector& y_pt, const Vector& x) const override;
  Index dim() const override { return b_.size(); }
  std::string describe() const override { return "quadratic"; }

 private:
  Matrix Q_;
  Vector b_;
};

}  // namespace fw

#endif  // FW_OBJECTIVES_HPP
