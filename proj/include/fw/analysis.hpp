#ifndef FW_ANALYSIS_HPP
#define FW_ANALYSIS_HPP

#include <iosfwd>
#include <optional>
#include <vector>

#include "fw/solver.hpp"

namespace fw {

enum class GrowthMode { Strong, Weak };
enum class Measure { Gap, PrimalDual, Subopt };

const char* measure_name(Measure m);
double measure_value(const IterationRecord& rec, Measure m);

/// Empirical (M, r) growth certificate: M_hat is the largest defining ratio
/// over sampled points and step lengths, so the growth inequality holds with
/// M = M_hat on every sample by construction (violations_at_M_hat rechecks).
struct GrowthCertificate {
  GrowthMode mode = GrowthMode::Strong;
  double r = 0.0;
  double M_hat = 0.0;
  long samples = 0;        // non-stationary samples that entered the max
  long skipped = 0;        // stationary samples (gap < 1e-12)
  long eta_grid = 0;
  long violations_at_M_hat = 0;
  long max_sample = 0;     // sample id of the maximizing ratio
  double max_eta = 0.0;    // step length of the maximizing ratio
};

struct CertifyOptions {
  std::optional<double> f_star;          // required for weak mode
  std::optional<Schedule> trajectory_schedule;  // default: log-adaptive
  long trajectory_T = 0;                 // default: 2 * n_samples
  std::optional<Vector> trajectory_x0;   // default: solver's vertex start
};

/// Samples half random convex combinations of 2-5 LMO vertices and half
/// points of an actual FW trajectory; per point, evaluates the growth ratio
/// on an n_eta-point log grid over [1e-4, 1] and returns the maximum.
/// Throws DegenerateInstanceError when all samples are stationary.
GrowthCertificate certify_growth(const Objective& obj,
                                 const FeasibleRegion& region, GrowthMode mode,
                                 double r, long n_samples, long n_eta,
                                 unsigned seed, const CertifyOptions& options = {});

/// Fraction of fresh samples (same sizes, new seed) whose growth ratio
/// exceeds margin * cert.M_hat.
double revalidate_certificate(const Objective& obj, const FeasibleRegion& region,
                              const GrowthCertificate& cert, long n_samples,
                              long n_eta, unsigned seed, double margin,
                              const CertifyOptions& options = {});

/// Rate envelope for the strong/weak growth convergence bounds.
/// Strong: k = min{g(S)-eps, 1/(1-r)};  weak: k = min{g(S)-eps, 1/(1-r), 2}.
class RateEnvelope {
 public:
  RateEnvelope(GrowthMode mode, Schedule schedule, long S, double epsilon,
               double M, double r);
  GrowthMode mode() const { return mode_; }
  const Schedule& schedule() const { return schedule_; }
  long S() const { return S_; }
  double epsilon() const { return epsilon_; }
  double M() const { return M_; }
  double r() const { return r_; }
  double k() const { return k_; }

  /// Bound value at iteration t >= S, anchored at the measured value at S.
  double bound_at(long t, double anchor_at_S) const;

 private:
  GrowthMode mode_;
  Schedule schedule_;
  long S_;
  double epsilon_;
  double M_;
  double r_;
  double k_;
};

double strong_rate_bound(const RateEnvelope& env, double primaldual_S, long t);
double weak_rate_bound(const RateEnvelope& env, double subopt_S, long t);

struct BoundViolation {
  long t;
  double measured;
  double bound;
};

/// Pointwise comparison measured(t) <= bound(t) * (1 + 1e-6) for
/// t in [S, end of trace]. Violations are data, not errors.
std::vector<BoundViolation> check_trace_against_bound(const Trace& trace,
                                                      const RateEnvelope& env,
                                                      Measure measure);

/// CSV serialization for certificates and bound-violation reports, written
/// alongside trace files.
void write_certificate_csv(std::ostream& out, const GrowthCertificate& cert);
void write_violations_csv(std::ostream& out,
                          const std::vector<BoundViolation>& violations);

struct SlopeFit {
  long t_lo = 0;
  long t_hi = 0;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  long samples = 0;
};

/// OLS of log(measure) on log(t) over t in [t_lo, t_hi], positive values
/// only. Requires t_lo >= 1, t_hi > 2 t_lo, and at least 20 positive samples
/// (else InsufficientDataError).
SlopeFit fit_rate_slope(const Trace& trace, Measure measure, long t_lo,
                        long t_hi);

}  // namespace fw

#endif  // FW_ANALYSIS_HPP
