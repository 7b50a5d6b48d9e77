#ifndef FW_EXPERIMENT_HPP
#define FW_EXPERIMENT_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fw/analysis.hpp"
#include "fw/datasets.hpp"
#include "fw/domains.hpp"
#include "fw/solver.hpp"

namespace fw {

enum class ProblemKind { Synthetic, Regression, Completion };

/// Experiment description, loadable from a key=value config file with CLI
/// overrides. The radius is either absolute (`beta`) or a factor of the
/// unconstrained optimizer's norm (`beta_factor`).
struct ExperimentConfig {
  ProblemKind problem = ProblemKind::Synthetic;
  SynthKind synth_kind = SynthKind::Identity;
  unsigned seed = 1;
  Index m = 20;
  Index n = 20;
  std::string dataset;          // regression CSV / movielens ratings file
  std::string target_column;    // regression CSV target
  double p = 2.0;               // lp geometry (regression problems)
  std::optional<double> beta;
  std::optional<double> beta_factor;
  std::optional<RegionSpec::Kind> region_kind;  // set via `region = lp:p:beta|nuc:beta`
  double rho = 1.0;
  std::optional<Index> max_users, max_items;  // movielens subsample caps
  std::vector<std::string> schedules{"fixed:2", "fixed:4", "logadaptive"};
  long T = 1000;
  std::string out_dir = "out";
  long reference_budget = 20000;

  void validate() const;
};

/// Parses `key = value` lines; '#' starts a comment, blank lines ignored.
ExperimentConfig load_config(const std::string& path);

/// Applies CLI overrides on top of a loaded config (empty/nullopt = keep).
struct ConfigOverrides {
  std::optional<std::string> schedules;  // comma-separated specs
  std::optional<long> T;
  std::optional<std::string> out_dir;
  std::optional<unsigned> seed;
};
void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides);

struct SummaryRow {
  std::string schedule;
  std::string measure;
  double final_value;
  double slope;
  double r_squared;
};

struct Manifest {
  ExperimentConfig config;
  double beta_resolved = 0.0;
  std::string f_star_source;  // "analytic" or "reference"
  double f_star = 0.0;
  double certified_lower = 0.0;
  std::vector<std::string> files;          // all emitted files
  std::vector<SummaryRow> summary;
  std::string manifest_path;
};

/// Builds the instance, resolves the radius and the reference optimum, runs
/// one trace per schedule, and writes trace CSVs, a summary CSV, a t^-2
/// guide CSV, and a JSON manifest into the output directory. Partial
/// outputs are removed if any stage fails.
Manifest run_experiment(const ExperimentConfig& config);

/// Instance as built by run_experiment, for callers that need the pieces.
struct ExperimentInstance {
  std::unique_ptr<Objective> objective;
  std::unique_ptr<FeasibleRegion> region;
  double beta_resolved = 0.0;
  std::optional<Vector> x_unc;
};
ExperimentInstance build_instance(const ExperimentConfig& config);

}  // namespace fw

#endif  // FW_EXPERIMENT_HPP
