#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/SVD>
#include <cmath>
#include <random>

#include "fw/errors.hpp"
#include "fw/linalg.hpp"

using fw::Index;
using fw::Matrix;
using fw::Vector;

namespace {

// Independent oracle: plain summation loop, no scaling tricks.
double lq_norm_oracle(const Vector& x, double q) {
  if (std::isinf(q)) {
    double best = 0.0;
    for (Index i = 0; i < x.size(); ++i) best = std::max(best, std::abs(x[i]));
    return best;
  }
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) sum += std::pow(std::abs(x[i]), q);
  return std::pow(sum, 1.0 / q);
}

// Independent oracle: normal equations (A^T A) x = A^T y with exact 2x2 inverse.
Vector normal_equations_2d(const Matrix& A, const Vector& y) {
  REQUIRE(A.cols() == 2);
  const Matrix G = A.transpose() * A;
  const Vector b = A.transpose() * y;
  const double det = G(0, 0) * G(1, 1) - G(0, 1) * G(1, 0);
  Vector x(2);
  x[0] = (G(1, 1) * b[0] - G(0, 1) * b[1]) / det;
  x[1] = (-G(1, 0) * b[0] + G(0, 0) * b[1]) / det;
  return x;
}

Vector random_vector(std::mt19937_64& rng, Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
  return v;
}

Matrix random_matrix(std::mt19937_64& rng, Index m, Index n) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix A(m, n);
  for (Index i = 0; i < m; ++i) {
    for (Index j = 0; j < n; ++j) A(i, j) = gauss(rng);
  }
  return A;
}

}  // namespace

TEST_CASE("lq_norm matches hand values") {
  Vector x(2);
  x << 3.0, 4.0;
  CHECK(fw::lq_norm(x, 2.0) == doctest::Approx(5.0).epsilon(1e-15));

  Vector ones(3);
  ones << 1.0, 1.0, 1.0;
  CHECK(fw::lq_norm(ones, fw::kInfNorm) == 1.0);

  Vector v(2);
  v << 1.0, 2.0;
  // (1^5 + 2^5)^(1/5) = 33^0.2
  CHECK(fw::lq_norm(v, 5.0) == doctest::Approx(std::pow(33.0, 0.2)).epsilon(1e-14));
  CHECK(fw::lq_norm(v, 5.0) == doctest::Approx(lq_norm_oracle(v, 5.0)).epsilon(1e-14));
}

TEST_CASE("lq_norm rejects q < 1") {
  Vector x = Vector::Ones(2);
  CHECK_THROWS_AS(fw::lq_norm(x, 0.5), fw::InvalidParameterError);
  CHECK_THROWS_AS(fw::lq_norm(x, -2.0), fw::InvalidParameterError);
}

TEST_CASE("lq_norm is a norm: homogeneity and triangle inequality") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> scale(-3.0, 3.0);
  const double qs[] = {1.0, 1.25, 2.0, 5.0, fw::kInfNorm};
  for (int rep = 0; rep < 200; ++rep) {
    const Vector a = random_vector(rng, 6);
    const Vector b = random_vector(rng, 6);
    const double alpha = scale(rng);
    for (const double q : qs) {
      const double na = fw::lq_norm(a, q);
      CHECK(fw::lq_norm(alpha * a, q) ==
            doctest::Approx(std::abs(alpha) * na).epsilon(1e-12));
      CHECK(fw::lq_norm(a + b, q) <= na + fw::lq_norm(b, q) + 1e-12);
      CHECK(na == doctest::Approx(lq_norm_oracle(a, q)).epsilon(1e-12));
    }
  }
}

TEST_CASE("least_squares on the identity and on zero targets") {
  Matrix I = Matrix::Identity(2, 2);
  Vector y(2);
  y << 1.0, 2.0;
  CHECK((fw::least_squares(I, y) - y).norm() == doctest::Approx(0.0));

  std::mt19937_64 rng(3);
  const Matrix A = random_matrix(rng, 5, 3);
  CHECK(fw::least_squares(A, Vector::Zero(5)).norm() == doctest::Approx(0.0));
}

TEST_CASE("least_squares agrees with the normal-equations oracle") {
  Matrix A(3, 2);
  A << 1.0, 0.0, 1.0, 1.0, 0.0, 1.0;
  Vector y(3);
  y << 1.0, 2.0, 1.0;
  const Vector x = fw::least_squares(A, y);
  const Vector x_oracle = normal_equations_2d(A, y);
  CHECK((x - x_oracle).norm() == doctest::Approx(0.0).epsilon(1e-12));

  // Residual gradient is numerically zero.
  const Vector rg = A.transpose() * (A * x - y);
  CHECK(rg.cwiseAbs().maxCoeff() <=
        1e-8 * (1.0 + (A.transpose() * y).cwiseAbs().maxCoeff()));
}

TEST_CASE("least_squares local optimality under random perturbations") {
  std::mt19937_64 rng(11);
  const Matrix A = random_matrix(rng, 12, 4);
  const Vector y = random_vector(rng, 12);
  const Vector x = fw::least_squares(A, y);
  const double base = (A * x - y).norm();
  for (int rep = 0; rep < 100; ++rep) {
    Vector delta = random_vector(rng, 4);
    delta *= 1e-3 / delta.norm();
    CHECK((A * (x + delta) - y).norm() >= base - 1e-8);
  }
}

TEST_CASE("least_squares flags rank deficiency with the estimated rank") {
  Matrix A(4, 3);
  A << 1.0, 2.0, 3.0,
       2.0, 4.0, 6.0,
       0.0, 1.0, 1.0,
       1.0, 0.0, 1.0;  // col2 = col0 + col1
  const Vector y = Vector::Ones(4);
  try {
    fw::least_squares(A, y);
    FAIL("expected RankDeficientError");
  } catch (const fw::RankDeficientError& e) {
    CHECK(e.estimated_rank() == 2);
  }
}

TEST_CASE("least_squares rejects mismatched shapes") {
  CHECK_THROWS_AS(fw::least_squares(Matrix::Identity(3, 3), Vector::Zero(2)),
                  fw::DimensionError);
}

TEST_CASE("top_singular_triplet on a diagonal matrix") {
  Matrix G = Matrix::Zero(2, 2);
  G(0, 0) = 3.0;
  G(1, 1) = 1.0;
  const fw::SingularTriplet t = fw::top_singular_triplet(G, 1e-12, 10000);
  CHECK(t.sigma == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(std::abs(t.left[0]) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(t.right[0]) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("top_singular_triplet recovers an exact rank-1 factor") {
  Vector u(3), v(4);
  u << 2.0, -1.0, 2.0;
  v << 1.0, 1.0, -1.0, 1.0;
  u /= u.norm();
  v /= v.norm();
  const Matrix G = 2.5 * u * v.transpose();
  const fw::SingularTriplet t = fw::top_singular_triplet(G, 1e-12, 10000);
  CHECK(t.sigma == doctest::Approx(2.5).epsilon(1e-10));
  CHECK(std::abs(t.left.dot(u)) == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(t.right.dot(v)) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("top_singular_triplet matches the full-SVD oracle") {
  std::mt19937_64 rng(42);
  const Matrix G = random_matrix(rng, 3, 4);
  const fw::SingularTriplet t = fw::top_singular_triplet(G, 1e-12, 100000);
  Eigen::JacobiSVD<Matrix> svd(G);
  CHECK(t.sigma == doctest::Approx(svd.singularValues()[0]).epsilon(1e-8));
  // Triplet residuals close in both directions.
  CHECK((G * t.right - t.sigma * t.left).norm() <= 1e-8 * t.sigma);
  CHECK((G.transpose() * t.left - t.sigma * t.right).norm() <= 1e-6 * t.sigma);
}

TEST_CASE("top_singular_triplet variational characterization") {
  std::mt19937_64 rng(9);
  const Matrix G = random_matrix(rng, 5, 3);
  const fw::SingularTriplet t = fw::top_singular_triplet(G, 1e-12, 100000);
  for (int rep = 0; rep < 100; ++rep) {
    Vector a = random_vector(rng, 5);
    Vector b = random_vector(rng, 3);
    a /= a.norm();
    b /= b.norm();
    CHECK(t.sigma >= std::abs(a.dot(G * b)) - 1e-8);
  }
}

TEST_CASE("top_singular_triplet rejects the zero matrix") {
  CHECK_THROWS_AS(fw::top_singular_triplet(Matrix::Zero(3, 3), 1e-10, 100),
                  fw::ZeroMatrixError);
}

TEST_CASE("top_singular_triplet reports non-convergence with the residual") {
  std::mt19937_64 rng(5);
  Matrix G = random_matrix(rng, 6, 6);
  try {
    fw::top_singular_triplet(G, 1e-15, 1);
    FAIL("expected ConvergenceError");
  } catch (const fw::ConvergenceError& e) {
    CHECK(e.last_residual() > 0.0);
  }
}

TEST_CASE("top_singular_triplet resolves a near-tied leading pair") {
  // sigma1/sigma2 relative gap 1e-6: plain power iteration needs ~1e7
  // iterations here; the Ritz guard column must crack it quickly.
  std::mt19937_64 rng(13);
  Matrix U(6, 6), V(6, 6);
  U = random_matrix(rng, 6, 6);
  V = random_matrix(rng, 6, 6);
  const Matrix Qu = Eigen::HouseholderQR<Matrix>(U).householderQ();
  const Matrix Qv = Eigen::HouseholderQR<Matrix>(V).householderQ();
  Vector sv(6);
  sv << 1.0, 1.0 - 1e-6, 0.4, 0.2, 0.1, 0.05;
  const Matrix G = Qu * sv.asDiagonal() * Qv.transpose();
  const fw::SingularTriplet t = fw::top_singular_triplet(G, 1e-10, 2000);
  CHECK(t.sigma == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((G * t.right - t.sigma * t.left).norm() <= 1e-9);
}

TEST_CASE("top_singular_triplet is deterministic") {
  std::mt19937_64 rng(21);
  const Matrix G = random_matrix(rng, 4, 5);
  const fw::SingularTriplet a = fw::top_singular_triplet(G, 1e-11, 100000, 3);
  const fw::SingularTriplet b = fw::top_singular_triplet(G, 1e-11, 100000, 3);
  CHECK(a.sigma == b.sigma);
  CHECK((a.left - b.left).norm() == 0.0);
  CHECK((a.right - b.right).norm() == 0.0);
}
