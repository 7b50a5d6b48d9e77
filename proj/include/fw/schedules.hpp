#ifndef FW_SCHEDULES_HPP
#define FW_SCHEDULES_HPP

#include <functional>
#include <optional>
#include <string>
#include <string_view>

namespace fw {

/// Open-loop step-size rule eta_t = g(t) / (t + g(t)) with g: N -> [2, inf).
///
/// Supported rules: fixed g(t) = ell for ell >= 2, the log-adaptive rule
/// g(t) = 2 + log(t+1) (natural log), and caller-supplied g. Caller-supplied
/// g is probed lazily; each evaluation must return a finite value >= 2 or
/// the schedule raises InvalidScheduleError.
class Schedule {
 public:
  static Schedule fixed(double ell);
  static Schedule log_adaptive();
  static Schedule custom(std::function<double(long)> g, std::string label);

  /// Parses a CLI spec: "fixed:<ell>" or "logadaptive".
  static Schedule parse(std::string_view spec);

  double g(long t) const;
  double eta(long t) const;
  const std::string& description() const { return description_; }

 private:
  Schedule(std::function<double(long)> g, std::string description, bool trusted)
      : g_(std::move(g)), description_(std::move(description)), trusted_(trusted) {}

  std::function<double(long)> g_;
  std::string description_;
  bool trusted_;  // built-in rules skip the per-call domain check
};

struct AssumptionViolation {
  enum class Which { A1, A2 };
  Which which;
  long t;       // violation between t and t+1
  double lhs;
  double rhs;
};

struct AssumptionReport {
  long t_max = 0;
  bool a1_ok = true;
  bool a2_ok = true;
  std::optional<AssumptionViolation> first_violation;
};

/// Probes A1 (g non-decreasing) and A2 (t/g(t) <= (t+1)/g(t+1), i.e. eta
/// non-increasing) for all t < t_max and reports the earliest violation.
AssumptionReport validate_assumptions(const Schedule& schedule, long t_max);

struct ProductBoundCheck {
  long S = 0;
  double epsilon = 0.0;
  long t = 0;
  double lhs = 0.0;      // prod_{i=S}^{t} (1 - (1 - eps/g(i)) eta_i)
  double rhs = 0.0;      // (eta_t / eta_{S-1})^(g(S) - eps)
  double log_lhs = 0.0;  // accumulated in log space; lhs/rhs may underflow
  double log_rhs = 0.0;
  bool satisfied = false;
};

/// Evaluates both sides of the cumulative-product bound. The product is
/// accumulated as a sum of log factors and compared in log space with
/// 1e-12 relative slack.
ProductBoundCheck cumulative_product_check(const Schedule& schedule, long S,
                                           double epsilon, long t);

}  // namespace fw

#endif  // FW_SCHEDULES_HPP
