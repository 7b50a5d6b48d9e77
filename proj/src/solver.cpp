#include "fw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "fw/errors.hpp"

namespace fw {

namespace {

void append_float(std::string& row, double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  row += buf;
}

}  // namespace

const char* Trace::csv_header() {
  return "t,eta,f,gap,dual,primaldual,subopt,bregman,identity_residual";
}

void Trace::write_csv(std::ostream& out) const {
  out << csv_header() << '\n';
  std::string row;
  for (const IterationRecord& rec : records) {
    row.clear();
    row += std::to_string(rec.t);
    row += ',';
    append_float(row, rec.eta);
    row += ',';
    append_float(row, rec.f_x);
    row += ',';
    append_float(row, rec.gap);
    row += ',';
    append_float(row, rec.dual_value);
    row += ',';
    append_float(row, rec.primaldual);
    row += ',';
    append_float(row, rec.subopt ? *rec.subopt
                                 : std::numeric_limits<double>::quiet_NaN());
    row += ',';
    append_float(row, rec.bregman_step);
    row += ',';
    append_float(row, rec.identity_residual);
    row += '\n';
    out << row;
  }
}

IterationRecord fw_step(IterateState& state, const Schedule& schedule,
                        const FeasibleRegion& region, const Objective& obj,
                        std::optional<double> f_star, double membership_tol) {
  const LmoResult vertex = region.lmo(state.grad);
  const double gap = state.grad.dot(state.x) - vertex.inner_product;
  const double scale_guard = std::max(1.0, std::abs(state.f_x));
  if (gap < -1e-12 * scale_guard) {
    std::ostringstream msg;
    msg << "fw_step: negative FW gap " << gap << " at t=" << state.t;
    throw NumericalInconsistencyError(msg.str());
  }

  const double eta = schedule.eta(state.t);
  Vector x_next = state.x;
  vertex.apply_step(x_next, eta);

  const double f_next = obj.value(x_next);
  const double bregman_step = obj.bregman(x_next, state.x);
  const double residual = f_next - (state.f_x - eta * gap + bregman_step);
  const double identity_scale = std::max(
      {1.0, std::abs(state.f_x), std::abs(f_next), eta * std::abs(gap),
       std::abs(bregman_step)});
  if (std::abs(residual) > 1e-6 * identity_scale) {
    std::ostringstream msg;
    msg << "fw_step: objective-reduction identity residual " << residual
        << " at t=" << state.t << " (value/gradient plumbing inconsistent)";
    throw NumericalInconsistencyError(msg.str());
  }
  if (!region.member(x_next, membership_tol)) {
    std::ostringstream msg;
    msg << "fw_step: iterate left the feasible region at t=" << state.t;
    throw NumericalInconsistencyError(msg.str());
  }

  IterationRecord rec;
  rec.t = state.t;
  rec.eta = eta;
  rec.f_x = state.f_x;
  rec.gap = gap;
  rec.dual_value = state.f_x - gap;
  rec.primaldual = gap;  // caller folds in the running best dual
  if (f_star) rec.subopt = state.f_x - *f_star;
  rec.bregman_step = bregman_step;
  rec.identity_residual = residual;
  rec.lmo_tie = vertex.tie;

  state.t += 1;
  state.x = std::move(x_next);
  state.f_x = f_next;
  state.grad = obj.gradient(state.x);
  return rec;
}

Trace fw_run(const Objective& obj, const FeasibleRegion& region,
             const Schedule& schedule, long T, const SolverOptions& options) {
  if (T < 1) throw InvalidParameterError("fw_run: T must be >= 1");
  if (obj.dim() != region.dim()) {
    throw DimensionError("fw_run: objective and region dimensions differ");
  }

  IterateState state;
  state.t = 0;
  if (options.x0) {
    if (options.x0->size() != region.dim()) {
      throw DimensionError("fw_run: x0 has wrong dimension");
    }
    if (!region.member(*options.x0, options.membership_tol)) {
      throw InvalidParameterError("fw_run: x0 is not feasible");
    }
    state.x = *options.x0;
  } else {
    // Vertex start: LMO at the gradient of the ball center.
    state.x = region.lmo(obj.gradient(Vector::Zero(region.dim()))).materialize();
  }
  state.f_x = obj.value(state.x);
  state.grad = obj.gradient(state.x);

  Trace trace;
  trace.config.schedule = schedule.description();
  trace.config.region = region.describe();
  trace.config.objective = obj.describe();
  trace.config.seed = options.seed;
  trace.config.f_star = options.f_star;
  trace.records.reserve(static_cast<std::size_t>(T));

  double best_dual = -std::numeric_limits<double>::infinity();
  for (long t = 0; t < T; ++t) {
    IterationRecord rec = fw_step(state, schedule, region, obj,
                                  options.f_star, options.membership_tol);
    best_dual = std::max(best_dual, rec.dual_value);
    rec.primaldual = rec.f_x - best_dual;
    trace.records.push_back(rec);
    if (options.gap_stop && rec.gap <= *options.gap_stop) break;
  }
  trace.best_dual = best_dual;
  return trace;
}

Vector canonical_vertex_start(const FeasibleRegion& region) {
  return region.lmo(Vector::Zero(region.dim())).materialize();
}

ReferenceOptimum reference_optimum(const Objective& obj,
                                   const FeasibleRegion& region, long budget) {
  if (budget < 1000) {
    throw InvalidParameterError("reference_optimum: budget must be >= 1000");
  }
  const Trace trace = fw_run(obj, region, Schedule::log_adaptive(), budget);
  ReferenceOptimum ref;
  ref.f_star_estimate = std::numeric_limits<double>::infinity();
  ref.certified_lower = -std::numeric_limits<double>::infinity();
  for (const IterationRecord& rec : trace.records) {
    ref.f_star_estimate = std::min(ref.f_star_estimate, rec.f_x);
    ref.certified_lower = std::max(ref.certified_lower, rec.dual_value);
  }
  return ref;
}

}  // namespace fw
