#include "fw/linalg.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "fw/errors.hpp"

namespace fw {

double lq_norm(const Vector& x, double q) {
  if (!(q >= 1.0)) {
    std::ostringstream msg;
    msg << "lq_norm: q must be >= 1 or infinity, got " << q;
    throw InvalidParameterError(msg.str());
  }
  if (x.size() == 0) return 0.0;
  const double scale = x.cwiseAbs().maxCoeff();
  if (scale == 0.0) return 0.0;
  if (std::isinf(q)) return scale;
  // Scaling by the max entry keeps |x_i/scale|^q away from overflow/underflow.
  double sum = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    sum += std::pow(std::abs(x[i]) / scale, q);
  }
  return scale * std::pow(sum, 1.0 / q);
}

Vector least_squares(const Matrix& A, const Vector& y) {
  if (A.rows() != y.size()) {
    std::ostringstream msg;
    msg << "least_squares: A has " << A.rows() << " rows but y has "
        << y.size() << " entries";
    throw DimensionError(msg.str());
  }
  Eigen::ColPivHouseholderQR<Matrix> qr(A);
  qr.setThreshold(1e-12);
  if (qr.rank() < A.cols()) {
    std::ostringstream msg;
    msg << "least_squares: A is numerically rank deficient (rank "
        << qr.rank() << " of " << A.cols() << ")";
    throw RankDeficientError(msg.str(), static_cast<long>(qr.rank()));
  }
  return qr.solve(y);
}

namespace {

// Sign convention: flip the pair so the largest-magnitude entry of the left
// vector is positive. Keeps repeated runs byte-identical.
void canonicalize(SingularTriplet& t) {
  Index imax = 0;
  t.left.cwiseAbs().maxCoeff(&imax);
  if (t.left[imax] < 0.0) {
    t.left = -t.left;
    t.right = -t.right;
  }
}

Vector seeded_unit_vector(Index n, unsigned seed) {
  std::mt19937_64 rng(seed == 0 ? 0x5eedULL : seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = gauss(rng);
  const double nrm = v.norm();
  return nrm > 0.0 ? Vector(v / nrm) : Vector(Vector::Unit(n, 0));
}

}  // namespace

namespace {

// Top eigenpair of the symmetric 2x2 matrix [[a, b], [b, c]].
void top_eigenpair_2x2(double a, double b, double c, double& theta,
                       double& s0, double& s1) {
  const double mid = 0.5 * (a + c);
  const double half_gap = std::hypot(0.5 * (a - c), b);
  theta = mid + half_gap;
  // Pick the better-conditioned eigenvector formula.
  double e0 = b, e1 = theta - a;
  if (std::abs(theta - c) > std::abs(theta - a)) {
    e0 = theta - c;
    e1 = b;
  }
  const double norm = std::hypot(e0, e1);
  if (norm < 1e-300) {
    s0 = 1.0;
    s1 = 0.0;
    return;
  }
  s0 = e0 / norm;
  s1 = e1 / norm;
}

}  // namespace

SingularTriplet top_singular_triplet(const Matrix& G, double tol,
                                     long max_iter, unsigned seed) {
  if (!(tol > 0.0)) throw InvalidParameterError("top_singular_triplet: tol must be > 0");
  if (G.size() == 0 || G.cwiseAbs().maxCoeff() < 1e-300) {
    throw ZeroMatrixError("top_singular_triplet: zero matrix has no dominant pair");
  }
  // Iterate on the smaller Gram side. A second guard column plus a 2x2
  // Rayleigh-Ritz step splits near-tied leading singular values, which stall
  // plain power iteration.
  const bool tall = G.rows() >= G.cols();
  const Index n = tall ? G.cols() : G.rows();
  const auto gram = [&](const Vector& x) {
    return tall ? Vector(G.transpose() * (G * x)) : Vector(G * (G.transpose() * x));
  };

  double last_residual = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 2; ++attempt) {
    Vector v0 = attempt == 0 ? Vector(Vector::Ones(n) / std::sqrt(double(n)))
                             : seeded_unit_vector(n, seed + 1);
    Vector v1 = seeded_unit_vector(n, seed + 2 + static_cast<unsigned>(attempt));
    v1 -= v0.dot(v1) * v0;
    if (n > 1 && v1.norm() > 1e-300) {
      v1 /= v1.norm();
    } else {
      v1.setZero();
    }
    const bool block = v1.size() > 0 && v1.norm() > 0.5;

    for (long it = 0; it < max_iter; ++it) {
      // Ritz extraction from span{v0, v1}.
      const Vector y0 = gram(v0);
      Vector y1;
      Vector candidate = v0;
      if (block) {
        y1 = gram(v1);
        double theta, s0, s1;
        top_eigenpair_2x2(v0.dot(y0), v0.dot(y1), v1.dot(y1), theta, s0, s1);
        candidate = s0 * v0 + s1 * v1;
        const double cn = candidate.norm();
        if (cn < 1e-300) candidate = v0; else candidate /= cn;
      }

      const Vector image = tall ? Vector(G * candidate) : Vector(G.transpose() * candidate);
      const double sigma = image.norm();
      if (sigma < 1e-300) break;  // start was (numerically) in the null space
      const Vector u = image / sigma;
      const Vector back = tall ? Vector(G.transpose() * u) : Vector(G * u);
      last_residual = (back - sigma * candidate).norm();
      if (last_residual <= tol * sigma) {
        SingularTriplet out;
        out.sigma = sigma;
        out.left = tall ? u : candidate;
        out.right = tall ? candidate : u;
        canonicalize(out);
        return out;
      }

      // Subspace update with Gram-Schmidt refresh of the guard column.
      const double y0n = y0.norm();
      if (y0n < 1e-300) break;
      v0 = y0 / y0n;
      if (block) {
        Vector w = y1 - v0.dot(y1) * v0;
        const double wn = w.norm();
        if (wn > 1e-12 * y0n) {
          v1 = w / wn;
        } else {
          v1 = seeded_unit_vector(n, seed + 17 + static_cast<unsigned>(it));
          v1 -= v0.dot(v1) * v0;
          const double rn = v1.norm();
          if (rn > 1e-300) v1 /= rn;
        }
      }
    }
  }
  std::ostringstream msg;
  msg << "top_singular_triplet: no convergence within " << max_iter
      << " iterations (residual " << last_residual << ")";
  throw ConvergenceError(msg.str(), last_residual);
}

}  // namespace fw
