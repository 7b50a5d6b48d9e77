#include "fw/domains.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <sstream>

#include "fw/errors.hpp"

namespace fw {

double LmoResult::dot(const Vector& c) const {
  if (kind == Kind::Dense) return c.dot(vertex);
  const Index rows = left.size();
  const Index cols = right.size();
  double sum = 0.0;
  for (Index j = 0; j < cols; ++j) {
    sum += right[j] * c.segment(j * rows, rows).dot(left);
  }
  return scale * sum;
}

void LmoResult::apply_step(Vector& x, double eta) const {
  x *= (1.0 - eta);
  if (kind == Kind::Dense) {
    x += eta * vertex;
    return;
  }
  const Index rows = left.size();
  const Index cols = right.size();
  for (Index j = 0; j < cols; ++j) {
    x.segment(j * rows, rows) += (eta * scale * right[j]) * left;
  }
}

Vector LmoResult::materialize() const {
  if (kind == Kind::Dense) return vertex;
  const Index rows = left.size();
  const Index cols = right.size();
  Vector flat(rows * cols);
  for (Index j = 0; j < cols; ++j) {
    flat.segment(j * rows, rows) = (scale * right[j]) * left;
  }
  return flat;
}

bool FeasibleRegion::member(const Vector& x, double tol) const {
  return norm(x) <= radius() * (1.0 + tol);
}

bool membership(const FeasibleRegion& region, const Vector& x, double tol) {
  if (x.size() != region.dim()) {
    std::ostringstream msg;
    msg << "membership: point has " << x.size() << " entries, region expects "
        << region.dim();
    throw DimensionError(msg.str());
  }
  return region.member(x, tol);
}

LpBall::LpBall(double p, double beta, Index dim)
    : p_(p), q_(p / (p - 1.0)), beta_(beta), dim_(dim) {
  if (!(p > 1.0) || !std::isfinite(p)) {
    throw InvalidParameterError("LpBall: p must be finite and > 1");
  }
  if (!(beta > 0.0)) throw InvalidParameterError("LpBall: beta must be > 0");
  if (dim < 1) throw InvalidParameterError("LpBall: dim must be >= 1");
}

LmoResult LpBall::lmo(const Vector& c) const {
  if (c.size() != dim_) {
    throw DimensionError("LpBall::lmo: direction has wrong dimension");
  }
  LmoResult out;
  out.kind = LmoResult::Kind::Dense;

  const double cmax = c.size() ? c.cwiseAbs().maxCoeff() : 0.0;
  if (cmax < 1e-300) {
    // Any vertex minimizes <0, v>; pick a fixed one.
    out.vertex = Vector::Zero(dim_);
    out.vertex[0] = -beta_;
    out.inner_product = c.dot(out.vertex);
    out.tie = true;
    return out;
  }

  // v_i = -beta sign(c_i) |c_i|^(q-1) / ||c||_q^(q-1), computed on c/cmax so
  // the powers stay in range for large q.
  Vector w = c / cmax;
  Vector mag(dim_);
  for (Index i = 0; i < dim_; ++i) {
    const double a = std::abs(w[i]);
    mag[i] = a < 1e-300 ? 0.0 : std::pow(a, q_ - 1.0);
  }
  double wq = 0.0;
  for (Index i = 0; i < dim_; ++i) wq += mag[i] * std::abs(w[i]);  // sum |w|^q
  const double denom = std::pow(wq, (q_ - 1.0) / q_);

  out.vertex.resize(dim_);
  for (Index i = 0; i < dim_; ++i) {
    const double s = w[i] > 0.0 ? 1.0 : (w[i] < 0.0 ? -1.0 : 0.0);
    out.vertex[i] = -beta_ * s * mag[i] / denom;
  }
  out.inner_product = c.dot(out.vertex);
  return out;
}

double LpBall::norm(const Vector& x) const { return lq_norm(x, p_); }

std::string LpBall::describe() const {
  std::ostringstream s;
  s << "lp:" << p_ << ":" << beta_;
  return s.str();
}

NuclearBall::NuclearBall(double beta, Index rows, Index cols, double lmo_tol,
                         long lmo_max_iter, unsigned seed)
    : beta_(beta), rows_(rows), cols_(cols), lmo_tol_(lmo_tol),
      lmo_max_iter_(lmo_max_iter), seed_(seed) {
  if (!(beta > 0.0)) throw InvalidParameterError("NuclearBall: beta must be > 0");
  if (rows < 1 || cols < 1) {
    throw InvalidParameterError("NuclearBall: rows and cols must be >= 1");
  }
  if (!(lmo_tol > 0.0)) throw InvalidParameterError("NuclearBall: lmo_tol must be > 0");
}

LmoResult NuclearBall::lmo(const Vector& c) const {
  if (c.size() != rows_ * cols_) {
    throw DimensionError("NuclearBall::lmo: direction has wrong dimension");
  }
  LmoResult out;
  out.kind = LmoResult::Kind::RankOne;
  Eigen::Map<const Matrix> G(c.data(), rows_, cols_);
  try {
    const SingularTriplet top =
        top_singular_triplet(G, lmo_tol_, lmo_max_iter_, seed_);
    out.scale = -beta_;
    out.left = top.left;
    out.right = top.right;
    out.inner_product = -beta_ * top.left.dot(G * top.right);
  } catch (const ZeroMatrixError&) {
    out.scale = -beta_;
    out.left = Vector::Unit(rows_, 0);
    out.right = Vector::Unit(cols_, 0);
    out.inner_product = 0.0;
    out.tie = true;
  }
  return out;
}

double NuclearBall::norm(const Vector& x) const {
  Eigen::Map<const Matrix> X(x.data(), rows_, cols_);
  Eigen::JacobiSVD<Matrix> svd(X);
  return svd.singularValues().sum();
}

std::string NuclearBall::describe() const {
  std::ostringstream s;
  s << "nuc:" << beta_;
  return s.str();
}

RegionSpec RegionSpec::parse(std::string_view text) {
  RegionSpec spec{};
  const auto fail = [&]() -> RegionSpec {
    throw InvalidParameterError("RegionSpec::parse: bad region '" +
                                std::string(text) +
                                "' (expected lp:<p>:<beta> or nuc:<beta>)");
  };
  const auto to_double = [&](std::string_view piece) {
    const std::string s(piece);
    std::size_t used = 0;
    double value = 0.0;
    try {
      value = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) fail();
    return value;
  };
  if (text.substr(0, 3) == "lp:") {
    const std::string_view rest = text.substr(3);
    const std::size_t colon = rest.find(':');
    if (colon == std::string_view::npos) return fail();
    spec.kind = Kind::Lp;
    spec.p = to_double(rest.substr(0, colon));
    spec.beta = to_double(rest.substr(colon + 1));
    return spec;
  }
  if (text.substr(0, 4) == "nuc:") {
    spec.kind = Kind::Nuclear;
    spec.beta = to_double(text.substr(4));
    return spec;
  }
  return fail();
}

}  // namespace fw
