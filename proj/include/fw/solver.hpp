#ifndef FW_SOLVER_HPP
#define FW_SOLVER_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fw/domains.hpp"
#include "fw/objectives.hpp"
#include "fw/schedules.hpp"

namespace fw {

struct IterateState {
  long t = 0;
  Vector x;
  double f_x = 0.0;
  Vector grad;
};

struct IterationRecord {
  long t = 0;
  double eta = 0.0;
  double f_x = 0.0;
  double gap = 0.0;
  double dual_value = 0.0;  // f_x - gap
  double primaldual = 0.0;  // f_x - best dual value seen so far
  std::optional<double> subopt;  // f_x - f_star, when a reference is known
  double bregman_step = 0.0;     // D_f(x_{t+1}, x_t)
  double identity_residual = 0.0;
  bool lmo_tie = false;
};

struct TraceConfig {
  std::string schedule;
  std::string region;
  std::string objective;
  unsigned seed = 0;
  std::optional<double> f_star;
};

struct Trace {
  std::vector<IterationRecord> records;
  double best_dual = 0.0;
  TraceConfig config;

  /// CSV rows `t,eta,f,gap,dual,primaldual,subopt,bregman,identity_residual`
  /// with 17-significant-digit floats; a missing subopt prints as nan.
  void write_csv(std::ostream& out) const;
  static const char* csv_header();
};

struct SolverOptions {
  std::optional<Vector> x0;          // default: LMO vertex at the center gradient
  std::optional<double> f_star;      // reference optimum for subopt reporting
  std::optional<double> gap_stop;    // optional early stop on the FW gap
  double membership_tol = 1e-9;
  unsigned seed = 0;                 // echoed into the trace config
};

/// One Frank-Wolfe step from `state`: LMO at the current gradient, gap,
/// convex step with eta(schedule, t), and the objective-reduction identity
/// check f(x') = f(x) - eta gap + D_f(x', x). A relative identity residual
/// above 1e-6 raises NumericalInconsistencyError.
IterationRecord fw_step(IterateState& state, const Schedule& schedule,
                        const FeasibleRegion& region, const Objective& obj,
                        std::optional<double> f_star = std::nullopt,
                        double membership_tol = 1e-9);

/// Runs T Frank-Wolfe iterations and records all three optimality measures.
Trace fw_run(const Objective& obj, const FeasibleRegion& region,
             const Schedule& schedule, long T,
             const SolverOptions& options = {});

/// The region's deterministic tie vertex (-beta e1 and friends), used by the
/// experiment harness as an instance-independent start.
Vector canonical_vertex_start(const FeasibleRegion& region);

struct ReferenceOptimum {
  double f_star_estimate = 0.0;   // min f over a log-adaptive reference run
  double certified_lower = 0.0;   // max dual value: certified_lower <= f*
};

/// Brackets the optimal value by a log-adaptive run of `budget` iterations
/// (budget >= 1000): certified_lower <= f* <= f_star_estimate.
ReferenceOptimum reference_optimum(const Objective& obj,
                                   const FeasibleRegion& region, long budget);

}  // namespace fw

#endif  // FW_SOLVER_HPP
