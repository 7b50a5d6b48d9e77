#include "fw/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "fw/errors.hpp"

namespace fw {

const char* measure_name(Measure m) {
  switch (m) {
    case Measure::Gap: return "gap";
    case Measure::PrimalDual: return "primaldual";
    case Measure::Subopt: return "subopt";
  }
  return "?";
}

double measure_value(const IterationRecord& rec, Measure m) {
  switch (m) {
    case Measure::Gap: return rec.gap;
    case Measure::PrimalDual: return rec.primaldual;
    case Measure::Subopt:
      if (!rec.subopt) {
        throw InvalidParameterError("measure_value: trace has no subopt column");
      }
      return *rec.subopt;
  }
  throw InvalidParameterError("measure_value: unknown measure");
}

namespace {

std::vector<double> log_eta_grid(long n_eta) {
  std::vector<double> grid(static_cast<std::size_t>(n_eta));
  for (long j = 0; j < n_eta; ++j) {
    const double frac = n_eta == 1 ? 1.0 : double(j) / double(n_eta - 1);
    grid[static_cast<std::size_t>(j)] = std::pow(10.0, -4.0 * (1.0 - frac));
  }
  return grid;
}

// Half random convex combinations of LMO vertices, half trajectory points.
std::vector<Vector> growth_sample_points(const Objective& obj,
                                         const FeasibleRegion& region,
                                         long n_samples, unsigned seed,
                                         const CertifyOptions& options) {
  std::vector<Vector> points;
  points.reserve(static_cast<std::size_t>(n_samples));

  const long n_traj = n_samples / 2;
  if (n_traj > 0) {
    const Schedule schedule = options.trajectory_schedule
                                  ? *options.trajectory_schedule
                                  : Schedule::log_adaptive();
    const long T = options.trajectory_T > 0 ? options.trajectory_T
                                            : std::max<long>(2 * n_traj, 32);
    IterateState state;
    state.x = options.trajectory_x0
                  ? *options.trajectory_x0
                  : region.lmo(obj.gradient(Vector::Zero(region.dim()))).materialize();
    state.f_x = obj.value(state.x);
    state.grad = obj.gradient(state.x);
    std::vector<Vector> iterates;
    iterates.reserve(static_cast<std::size_t>(T));
    for (long t = 0; t < T; ++t) {
      iterates.push_back(state.x);
      fw_step(state, schedule, region, obj);
    }
    if (static_cast<long>(iterates.size()) <= n_traj) {
      points.insert(points.end(), iterates.begin(), iterates.end());
    } else {
      for (long k = 0; k < n_traj; ++k) {
        points.push_back(iterates[static_cast<std::size_t>(
            k * static_cast<long>(iterates.size()) / n_traj)]);
      }
    }
  }

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_int_distribution<int> n_vertices(2, 5);
  std::exponential_distribution<double> expo(1.0);
  while (static_cast<long>(points.size()) < n_samples) {
    const int m = n_vertices(rng);
    Vector combo = Vector::Zero(region.dim());
    double total = 0.0;
    for (int v = 0; v < m; ++v) {
      Vector dir(region.dim());
      for (Index i = 0; i < dir.size(); ++i) dir[i] = gauss(rng);
      const double w = expo(rng);
      combo += w * region.lmo(dir).materialize();
      total += w;
    }
    points.push_back(combo / total);
  }
  return points;
}

struct RatioScan {
  double max_ratio = 0.0;
  long max_sample = 0;
  double max_eta = 0.0;
  long used = 0;
  long skipped = 0;
  std::vector<double> ratios;  // one per (sample, eta) pair
};

RatioScan scan_growth_ratios(const Objective& obj, const FeasibleRegion& region,
                             GrowthMode mode, double r,
                             const std::vector<Vector>& points, long n_eta,
                             std::optional<double> f_star) {
  RatioScan scan;
  const std::vector<double> etas = log_eta_grid(n_eta);
  for (std::size_t s = 0; s < points.size(); ++s) {
    const Vector& x = points[s];
    const Vector grad = obj.gradient(x);
    const LmoResult vertex = region.lmo(grad);
    const double gap = grad.dot(x) - vertex.inner_product;
    if (gap < 1e-12) {
      ++scan.skipped;
      continue;
    }
    ++scan.used;
    const double fx = obj.value(x);
    const Vector v = vertex.materialize();
    for (const double eta : etas) {
      const Vector y = x + eta * (v - x);
      const double breg = obj.bregman(y, x);
      double ratio = 0.0;
      if (mode == GrowthMode::Strong) {
        ratio = 2.0 * breg / (eta * eta * std::pow(gap, r));
      } else {
        const double subopt = std::max(0.0, fx - *f_star);
        ratio = 2.0 * breg * std::pow(subopt, 1.0 - r) / (eta * eta * gap);
      }
      scan.ratios.push_back(ratio);
      if (ratio > scan.max_ratio) {
        scan.max_ratio = ratio;
        scan.max_sample = static_cast<long>(s);
        scan.max_eta = eta;
      }
    }
  }
  return scan;
}

void validate_certify_args(GrowthMode mode, double r, long n_samples,
                           long n_eta, const CertifyOptions& options) {
  if (n_samples < 10) throw InvalidParameterError("certify_growth: n_samples must be >= 10");
  if (n_eta < 10) throw InvalidParameterError("certify_growth: n_eta must be >= 10");
  if (!(r >= 0.0 && r <= 1.0)) throw InvalidParameterError("certify_growth: r must lie in [0, 1]");
  if (mode == GrowthMode::Weak && !options.f_star) {
    throw InvalidParameterError("certify_growth: weak mode needs an f* source");
  }
}

}  // namespace

GrowthCertificate certify_growth(const Objective& obj,
                                 const FeasibleRegion& region, GrowthMode mode,
                                 double r, long n_samples, long n_eta,
                                 unsigned seed, const CertifyOptions& options) {
  validate_certify_args(mode, r, n_samples, n_eta, options);
  const std::vector<Vector> points =
      growth_sample_points(obj, region, n_samples, seed, options);
  const RatioScan scan =
      scan_growth_ratios(obj, region, mode, r, points, n_eta, options.f_star);
  if (scan.used == 0) {
    throw DegenerateInstanceError(
        "certify_growth: every sample was stationary (gap < 1e-12)");
  }

  GrowthCertificate cert;
  cert.mode = mode;
  cert.r = r;
  cert.M_hat = scan.max_ratio;
  cert.samples = scan.used;
  cert.skipped = scan.skipped;
  cert.eta_grid = n_eta;
  cert.max_sample = scan.max_sample;
  cert.max_eta = scan.max_eta;
  cert.violations_at_M_hat = static_cast<long>(
      std::count_if(scan.ratios.begin(), scan.ratios.end(), [&](double rho) {
        return rho > cert.M_hat * (1.0 + 1e-12);
      }));
  return cert;
}

double revalidate_certificate(const Objective& obj, const FeasibleRegion& region,
                              const GrowthCertificate& cert, long n_samples,
                              long n_eta, unsigned seed, double margin,
                              const CertifyOptions& options) {
  validate_certify_args(cert.mode, cert.r, n_samples, n_eta, options);
  const std::vector<Vector> points =
      growth_sample_points(obj, region, n_samples, seed, options);
  const RatioScan scan = scan_growth_ratios(obj, region, cert.mode, cert.r,
                                            points, n_eta, options.f_star);
  if (scan.ratios.empty()) {
    throw DegenerateInstanceError(
        "revalidate_certificate: every sample was stationary");
  }
  const double threshold = margin * cert.M_hat;
  const long violations = static_cast<long>(std::count_if(
      scan.ratios.begin(), scan.ratios.end(),
      [&](double rho) { return rho > threshold; }));
  return double(violations) / double(scan.ratios.size());
}

RateEnvelope::RateEnvelope(GrowthMode mode, Schedule schedule, long S,
                           double epsilon, double M, double r)
    : mode_(mode), schedule_(std::move(schedule)), S_(S), epsilon_(epsilon),
      M_(M), r_(r) {
  if (S_ < 1) throw InvalidParameterError("RateEnvelope: S must be >= 1");
  const double gS = schedule_.g(S_);
  if (!(epsilon_ > 0.0 && epsilon_ < gS)) {
    std::ostringstream msg;
    msg << "RateEnvelope: epsilon must lie in ]0, g(S)[ = ]0, " << gS
        << "[, got " << epsilon_;
    throw InvalidParameterError(msg.str());
  }
  if (!(r_ >= 0.0 && r_ < 1.0)) {
    throw InvalidParameterError("RateEnvelope: r must lie in [0, 1[");
  }
  if (!(M_ > 0.0)) throw InvalidParameterError("RateEnvelope: M must be > 0");
  k_ = std::min(gS - epsilon_, 1.0 / (1.0 - r_));
  if (mode_ == GrowthMode::Weak) k_ = std::min(k_, 2.0);
}

double RateEnvelope::bound_at(long t, double anchor_at_S) const {
  if (t < S_) throw InvalidParameterError("RateEnvelope::bound_at: t must be >= S");
  const double gS = schedule_.g(S_);
  const double eta_prev = schedule_.eta(t - 1);
  const double decay = std::pow(eta_prev / schedule_.eta(S_ - 1), gS - epsilon_);
  const double anchored = anchor_at_S * decay;
  const double mg = M_ * schedule_.g(t - 1) / (2.0 * epsilon_);
  double coeff = std::pow(mg, 1.0 / (1.0 - r_));
  if (mode_ == GrowthMode::Weak) coeff += 0.5 * M_;
  return std::max(anchored, coeff * std::pow(eta_prev, k_));
}

double strong_rate_bound(const RateEnvelope& env, double primaldual_S, long t) {
  if (env.mode() != GrowthMode::Strong) {
    throw InvalidParameterError("strong_rate_bound: envelope is not strong-mode");
  }
  return env.bound_at(t, primaldual_S);
}

double weak_rate_bound(const RateEnvelope& env, double subopt_S, long t) {
  if (env.mode() != GrowthMode::Weak) {
    throw InvalidParameterError("weak_rate_bound: envelope is not weak-mode");
  }
  return env.bound_at(t, subopt_S);
}

std::vector<BoundViolation> check_trace_against_bound(const Trace& trace,
                                                      const RateEnvelope& env,
                                                      Measure measure) {
  const long S = env.S();
  if (static_cast<long>(trace.records.size()) <= S) {
    throw InvalidParameterError("check_trace_against_bound: trace shorter than S");
  }
  const double anchor = measure_value(trace.records[static_cast<std::size_t>(S)], measure);
  std::vector<BoundViolation> violations;
  for (std::size_t idx = static_cast<std::size_t>(S); idx < trace.records.size(); ++idx) {
    const long t = trace.records[idx].t;
    const double measured = measure_value(trace.records[idx], measure);
    const double bound = env.bound_at(t, anchor);
    if (measured > bound * (1.0 + 1e-6)) {
      violations.push_back(BoundViolation{t, measured, bound});
    }
  }
  return violations;
}

namespace {

std::string csv_float(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

void write_certificate_csv(std::ostream& out, const GrowthCertificate& cert) {
  out << "mode,r,M_hat,samples,skipped,eta_grid,violations_at_M_hat,max_sample,max_eta\n";
  out << (cert.mode == GrowthMode::Strong ? "strong" : "weak") << ','
      << csv_float(cert.r) << ',' << csv_float(cert.M_hat) << ',' << cert.samples
      << ',' << cert.skipped << ',' << cert.eta_grid << ','
      << cert.violations_at_M_hat << ',' << cert.max_sample << ','
      << csv_float(cert.max_eta) << '\n';
}

void write_violations_csv(std::ostream& out,
                          const std::vector<BoundViolation>& violations) {
  out << "t,measured,bound\n";
  for (const BoundViolation& v : violations) {
    out << v.t << ',' << csv_float(v.measured) << ',' << csv_float(v.bound) << '\n';
  }
}

SlopeFit fit_rate_slope(const Trace& trace, Measure measure, long t_lo,
                        long t_hi) {
  if (t_lo < 1) throw InvalidParameterError("fit_rate_slope: t_lo must be >= 1");
  if (t_hi <= 2 * t_lo) {
    throw InvalidParameterError("fit_rate_slope: need t_hi > 2 * t_lo");
  }
  if (t_hi > static_cast<long>(trace.records.size())) {
    throw InvalidParameterError("fit_rate_slope: t_hi exceeds trace length");
  }

  std::vector<double> xs, ys;
  for (const IterationRecord& rec : trace.records) {
    if (rec.t < t_lo || rec.t > t_hi) continue;
    const double m = measure_value(rec, measure);
    if (!(m > 0.0)) continue;
    xs.push_back(std::log(double(rec.t)));
    ys.push_back(std::log(m));
  }
  if (xs.size() < 20) {
    std::ostringstream msg;
    msg << "fit_rate_slope: only " << xs.size()
        << " positive samples in [" << t_lo << ", " << t_hi << "], need >= 20";
    throw InsufficientDataError(msg.str());
  }

  const double n = double(xs.size());
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double dx = xs[i] - mx, dy = ys[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  SlopeFit fit;
  fit.t_lo = t_lo;
  fit.t_hi = t_hi;
  fit.samples = static_cast<long>(xs.size());
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

}  // namespace fw
