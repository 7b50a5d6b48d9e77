#ifndef FW_DOMAINS_HPP
#define FW_DOMAINS_HPP

#include <memory>
#include <string>
#include <string_view>

#include "fw/linalg.hpp"

namespace fw {

/// Output of a linear minimization oracle call.
///
/// For vector regions the vertex is held directly; for the nuclear-norm
/// ball it is kept as the rank-1 factorization scale * left * right^T and
/// only expanded onto a dense iterate when a step is applied.
struct LmoResult {
  enum class Kind { Dense, RankOne };
  Kind kind = Kind::Dense;

  Vector vertex;        // Dense only
  double scale = 0.0;   // RankOne only
  Vector left, right;   // RankOne only

  double inner_product = 0.0;  // <c, vertex>
  bool tie = false;            // c = 0: the deterministic fallback vertex

  /// <c, v> against a flat point of matching layout.
  double dot(const Vector& c) const;

  /// x <- (1 - eta) x + eta v, expanding the rank-1 factor in place.
  void apply_step(Vector& x, double eta) const;

  /// Flat copy of the vertex (column-major for rank-1 factors).
  Vector materialize() const;
};

/// Compact convex feasible region accessed through an LMO and a norm.
/// Points are exchanged as flat vectors; matrix-shaped regions use
/// column-major layout.
class FeasibleRegion {
 public:
  virtual ~FeasibleRegion() = default;
  virtual LmoResult lmo(const Vector& c) const = 0;
  virtual double norm(const Vector& x) const = 0;
  virtual double radius() const = 0;
  virtual Index dim() const = 0;
  virtual std::string describe() const = 0;
  bool member(const Vector& x, double tol) const;
};

bool membership(const FeasibleRegion& region, const Vector& x, double tol);

/// {x : ||x||_p <= beta} for p > 1. The LMO is the closed-form dual-norm
/// minimizer; p = 1 and p = inf are excluded (non-smooth dual).
class LpBall final : public FeasibleRegion {
 public:
  LpBall(double p, double beta, Index dim);
  LmoResult lmo(const Vector& c) const override;
  double norm(const Vector& x) const override;
  double radius() const override { return beta_; }
  Index dim() const override { return dim_; }
  std::string describe() const override;
  double p() const { return p_; }
  double dual_exponent() const { return q_; }

 private:
  double p_;
  double q_;  // p / (p - 1)
  double beta_;
  Index dim_;
};

/// {X : ||X||_nuc <= beta}. The LMO returns -beta u1 v1^T from the dominant
/// singular pair of the (flattened) direction matrix.
class NuclearBall final : public FeasibleRegion {
 public:
  NuclearBall(double beta, Index rows, Index cols, double lmo_tol = 1e-9,
              long lmo_max_iter = 100000, unsigned seed = 0);
  LmoResult lmo(const Vector& c) const override;
  double norm(const Vector& x) const override;  // nuclear norm
  double radius() const override { return beta_; }
  Index dim() const override { return rows_ * cols_; }
  std::string describe() const override;
  Index rows() const { return rows_; }
  Index cols() const { return cols_; }
  double lmo_tol() const { return lmo_tol_; }

 private:
  double beta_;
  Index rows_, cols_;
  double lmo_tol_;
  long lmo_max_iter_;
  unsigned seed_;
};

/// Region spec for the CLI: "lp:<p>:<beta>" or "nuc:<beta>". Shape is
/// supplied by the problem instance.
struct RegionSpec {
  enum class Kind { Lp, Nuclear };
  Kind kind;
  double p = 0.0;     // Lp only
  double beta = 0.0;  // absolute radius
  static RegionSpec parse(std::string_view text);
};

}  // namespace fw

#endif  // FW_DOMAINS_HPP
