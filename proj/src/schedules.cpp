#include "fw/schedules.hpp"

#include <cmath>
#include <sstream>

#include "fw/errors.hpp"

namespace fw {

Schedule Schedule::fixed(double ell) {
  if (!(std::isfinite(ell) && ell >= 2.0)) {
    std::ostringstream msg;
    msg << "Schedule::fixed: ell must be finite and >= 2, got " << ell;
    throw InvalidParameterError(msg.str());
  }
  std::ostringstream label;
  label << "fixed:" << ell;
  return Schedule([ell](long) { return ell; }, label.str(), true);
}

Schedule Schedule::log_adaptive() {
  return Schedule([](long t) { return 2.0 + std::log(double(t) + 1.0); },
                  "logadaptive", true);
}

Schedule Schedule::custom(std::function<double(long)> g, std::string label) {
  return Schedule(std::move(g), std::move(label), false);
}

Schedule Schedule::parse(std::string_view spec) {
  if (spec == "logadaptive") return log_adaptive();
  constexpr std::string_view prefix = "fixed:";
  if (spec.substr(0, prefix.size()) == prefix) {
    const std::string num(spec.substr(prefix.size()));
    std::size_t used = 0;
    double ell = 0.0;
    try {
      ell = std::stod(num, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != num.size() || num.empty()) {
      throw InvalidParameterError("Schedule::parse: bad fixed spec '" +
                                  std::string(spec) + "'");
    }
    return fixed(ell);
  }
  throw InvalidParameterError("Schedule::parse: unknown schedule '" +
                              std::string(spec) +
                              "' (expected fixed:<ell> or logadaptive)");
}

double Schedule::g(long t) const {
  if (t < 0) throw InvalidParameterError("Schedule::g: t must be >= 0");
  const double value = g_(t);
  if (!trusted_ && !(std::isfinite(value) && value >= 2.0)) {
    std::ostringstream msg;
    msg << "schedule '" << description_ << "': g(" << t << ") = " << value
        << " leaves the domain [2, inf)";
    throw InvalidScheduleError(msg.str());
  }
  return value;
}

double Schedule::eta(long t) const {
  const double gt = g(t);
  return gt / (double(t) + gt);
}

AssumptionReport validate_assumptions(const Schedule& schedule, long t_max) {
  if (t_max < 1) throw InvalidParameterError("validate_assumptions: t_max must be >= 1");
  AssumptionReport report;
  report.t_max = t_max;
  double g_t = schedule.g(0);
  for (long t = 0; t < t_max; ++t) {
    const double g_next = schedule.g(t + 1);
    if (report.a1_ok && !(g_next >= g_t)) {
      report.a1_ok = false;
      if (!report.first_violation) {
        report.first_violation = AssumptionViolation{
            AssumptionViolation::Which::A1, t, g_t, g_next};
      }
    }
    const double lhs = double(t) / g_t;
    const double rhs = double(t + 1) / g_next;
    if (report.a2_ok && !(lhs <= rhs)) {
      report.a2_ok = false;
      if (!report.first_violation) {
        report.first_violation = AssumptionViolation{
            AssumptionViolation::Which::A2, t, lhs, rhs};
      }
    }
    if (!report.a1_ok && !report.a2_ok) break;
    g_t = g_next;
  }
  return report;
}

ProductBoundCheck cumulative_product_check(const Schedule& schedule, long S,
                                           double epsilon, long t) {
  if (S < 1 || t < S) {
    std::ostringstream msg;
    msg << "cumulative_product_check: need 1 <= S <= t, got S=" << S
        << " t=" << t;
    throw InvalidParameterError(msg.str());
  }
  const double gS = schedule.g(S);
  if (!(epsilon > 0.0 && epsilon < gS)) {
    std::ostringstream msg;
    msg << "cumulative_product_check: epsilon must lie in ]0, g(S)[ = ]0, "
        << gS << "[, got " << epsilon;
    throw InvalidParameterError(msg.str());
  }

  ProductBoundCheck check;
  check.S = S;
  check.epsilon = epsilon;
  check.t = t;

  double log_sum = 0.0;
  for (long i = S; i <= t; ++i) {
    const double gi = schedule.g(i);
    const double eta_i = gi / (double(i) + gi);
    log_sum += std::log1p(-(1.0 - epsilon / gi) * eta_i);
  }
  check.log_lhs = log_sum;
  check.log_rhs =
      (gS - epsilon) * (std::log(schedule.eta(t)) - std::log(schedule.eta(S - 1)));
  check.lhs = std::exp(check.log_lhs);
  check.rhs = std::exp(check.log_rhs);
  check.satisfied = check.log_lhs <= check.log_rhs + std::log1p(1e-12);
  return check;
}

}  // namespace fw
