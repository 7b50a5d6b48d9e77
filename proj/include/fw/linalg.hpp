#ifndef FW_LINALG_HPP
#define FW_LINALG_HPP

#include <Eigen/Dense>
#include <limits>

namespace fw {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

inline constexpr double kInfNorm = std::numeric_limits<double>::infinity();

/// Top singular value with its unit left/right vectors.
struct SingularTriplet {
  double sigma = 0.0;
  Vector left;
  Vector right;
};

/// ell_q norm of x for q >= 1, or the max norm for q = kInfNorm.
/// Throws InvalidParameterError for q < 1.
double lq_norm(const Vector& x, double q);

/// Minimum-residual solution of ||A x - y||_2 via a column-pivoted
/// Householder QR factorization. A must have full column rank; a pivot
/// below 1e-12 times the largest pivot raises RankDeficientError with the
/// estimated rank.
Vector least_squares(const Matrix& A, const Vector& y);

/// Dominant singular triplet of G by power iteration on G^T G, started from
/// the normalized all-ones vector (re-seeded deterministically from `seed`
/// if that start is degenerate or stalls). The returned triplet satisfies
/// ||G v - sigma u|| <= tol * sigma. Throws ZeroMatrixError for G = 0 and
/// ConvergenceError (carrying the last residual) past max_iter.
SingularTriplet top_singular_triplet(const Matrix& G, double tol,
                                     long max_iter, unsigned seed = 0);

}  // namespace fw

#endif  // FW_LINALG_HPP
