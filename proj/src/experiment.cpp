#include "fw/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <limits>
#include <sstream>

#include "fw/errors.hpp"

namespace fw {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
  if (schedules.empty()) {
    throw InvalidParameterError("config: at least one schedule is required");
  }
  if (T < 10) throw InvalidParameterError("config: T must be >= 10");
  if (!beta && !beta_factor) {
    throw InvalidParameterError("config: set beta or beta_factor");
  }
  if (beta && beta_factor) {
    throw InvalidParameterError("config: beta and beta_factor are exclusive");
  }
  if (beta && !(*beta > 0.0)) throw InvalidParameterError("config: beta must be > 0");
  if (beta_factor && !(*beta_factor > 0.0)) {
    throw InvalidParameterError("config: beta_factor must be > 0");
  }
  if (problem != ProblemKind::Synthetic && dataset.empty()) {
    throw InvalidParameterError("config: dataset path is required");
  }
  if (problem == ProblemKind::Regression && target_column.empty()) {
    throw InvalidParameterError("config: target column is required");
  }
  if (problem == ProblemKind::Completion && !beta) {
    throw InvalidParameterError("config: completion needs an absolute beta");
  }
  if (region_kind) {
    const bool nuclear = *region_kind == RegionSpec::Kind::Nuclear;
    if (nuclear != (problem == ProblemKind::Completion)) {
      throw InvalidParameterError(
          "config: region kind does not match the problem (nuc:* is for "
          "completion, lp:*:* for regression)");
    }
  }
  if (reference_budget < 1000) {
    throw InvalidParameterError("config: ref_budget must be >= 1000");
  }
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream stream(s);
  while (std::getline(stream, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

long to_long(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const long v = std::stol(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidParameterError("config: bad integer for '" + key + "': " + value);
}

double to_double(const std::string& value, const std::string& key) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used == value.size()) return v;
  } catch (const std::exception&) {
  }
  throw InvalidParameterError("config: bad number for '" + key + "': " + value);
}

std::string sanitize(const std::string& name) {
  std::string out = name;
  for (char& c : out) {
    if (c == ':' || c == '/' || c == '.') c = '_';
  }
  return out;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("load_config: cannot open '" + path + "'");

  ExperimentConfig config;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') continue;  // section marker
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      std::ostringstream msg;
      msg << "load_config: line " << line_no << " is not key=value: '" << line << "'";
      throw DataError(msg.str());
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "problem") {
      if (value == "synthetic") config.problem = ProblemKind::Synthetic;
      else if (value == "regression") config.problem = ProblemKind::Regression;
      else if (value == "completion") config.problem = ProblemKind::Completion;
      else throw InvalidParameterError("config: unknown problem '" + value + "'");
    } else if (key == "kind") {
      if (value == "identity") config.synth_kind = SynthKind::Identity;
      else if (value == "gaussian") config.synth_kind = SynthKind::Gaussian;
      else throw InvalidParameterError("config: unknown kind '" + value + "'");
    } else if (key == "seed") {
      config.seed = static_cast<unsigned>(to_long(value, key));
    } else if (key == "m") {
      config.m = to_long(value, key);
    } else if (key == "n") {
      config.n = to_long(value, key);
    } else if (key == "dataset") {
      config.dataset = value;
    } else if (key == "target") {
      config.target_column = value;
    } else if (key == "p") {
      config.p = to_double(value, key);
    } else if (key == "beta") {
      config.beta = to_double(value, key);
    } else if (key == "beta_factor") {
      config.beta_factor = to_double(value, key);
    } else if (key == "region") {
      // lp:<p>:<beta> | nuc:<beta>, shorthand for the geometry keys.
      const RegionSpec spec = RegionSpec::parse(value);
      config.region_kind = spec.kind;
      config.beta = spec.beta;
      if (spec.kind == RegionSpec::Kind::Lp) config.p = spec.p;
    } else if (key == "rho") {
      config.rho = to_double(value, key);
    } else if (key == "max_users") {
      config.max_users = to_long(value, key);
    } else if (key == "max_items") {
      config.max_items = to_long(value, key);
    } else if (key == "schedules") {
      config.schedules = split_list(value);
    } else if (key == "T") {
      config.T = to_long(value, key);
    } else if (key == "out") {
      config.out_dir = value;
    } else if (key == "ref_budget") {
      config.reference_budget = to_long(value, key);
    } else {
      throw InvalidParameterError("config: unknown key '" + key + "'");
    }
  }
  return config;
}

void apply_overrides(ExperimentConfig& config, const ConfigOverrides& overrides) {
  if (overrides.schedules) config.schedules = split_list(*overrides.schedules);
  if (overrides.T) config.T = *overrides.T;
  if (overrides.out_dir) config.out_dir = *overrides.out_dir;
  if (overrides.seed) config.seed = *overrides.seed;
}

ExperimentInstance build_instance(const ExperimentConfig& config) {
  config.validate();
  ExperimentInstance instance;

  if (config.problem == ProblemKind::Completion) {
    std::optional<SubsampleSpec> subsample;
    if (config.max_users || config.max_items) {
      subsample = SubsampleSpec{config.max_users.value_or(0),
                                config.max_items.value_or(0), config.seed};
    }
    DatasetBundle bundle = load_movielens(config.dataset, subsample);
    instance.beta_resolved = *config.beta;
    instance.region = std::make_unique<NuclearBall>(
        instance.beta_resolved, bundle.rows, bundle.cols);
    instance.objective = std::make_unique<CompletionObjective>(
        std::move(bundle.observed), bundle.rows, bundle.cols, config.rho);
    return instance;
  }

  Matrix A;
  Vector y;
  if (config.problem == ProblemKind::Synthetic) {
    SynthRegression synth =
        synth_regression(config.seed, config.m, config.n, config.synth_kind);
    A = std::move(synth.A);
    y = std::move(synth.y);
    instance.x_unc = std::move(synth.x_unc);
  } else {
    DatasetBundle bundle = load_dense_csv(config.dataset, config.target_column);
    A = std::move(bundle.A);
    y = std::move(bundle.y);
    instance.x_unc = least_squares(A, y);
  }

  if (config.beta) {
    instance.beta_resolved = *config.beta;
  } else {
    instance.beta_resolved =
        *config.beta_factor * lq_norm(*instance.x_unc, config.p);
    if (!(instance.beta_resolved > 0.0)) {
      throw InvalidParameterError(
          "config: beta_factor resolution produced a non-positive radius");
    }
  }
  instance.region = std::make_unique<LpBall>(config.p, instance.beta_resolved,
                                             A.cols());
  instance.objective =
      std::make_unique<RegressionObjective>(std::move(A), std::move(y));
  return instance;
}

namespace {

// Analytic optimum for A = I instances: zero when the target is feasible,
// and the l2 projection value when p = 2.
std::optional<double> analytic_f_star(const ExperimentConfig& config,
                                      const ExperimentInstance& instance) {
  if (config.problem != ProblemKind::Synthetic ||
      config.synth_kind != SynthKind::Identity) {
    return std::nullopt;
  }
  const auto* reg = dynamic_cast<const RegressionObjective*>(instance.objective.get());
  if (reg == nullptr) return std::nullopt;
  const Vector& y = reg->target();
  const double norm_p = lq_norm(y, config.p);
  if (norm_p <= instance.beta_resolved) return 0.0;
  if (config.p == 2.0) {
    const double d = y.norm() - instance.beta_resolved;
    return 0.5 * d * d;
  }
  return std::nullopt;
}

void write_summary_csv(std::ostream& out, const std::vector<SummaryRow>& rows) {
  out << "schedule,measure,final_value,slope,r_squared\n";
  for (const SummaryRow& row : rows) {
    out << row.schedule << ',' << row.measure << ','
        << format_double(row.final_value) << ',' << format_double(row.slope)
        << ',' << format_double(row.r_squared) << '\n';
  }
}

}  // namespace

Manifest run_experiment(const ExperimentConfig& config) {
  config.validate();
  std::vector<fs::path> created;
  const auto cleanup = [&]() {
    for (const fs::path& file : created) {
      std::error_code ec;
      fs::remove(file, ec);
    }
  };

  try {
    ExperimentInstance instance = build_instance(config);
    const Objective& obj = *instance.objective;
    const FeasibleRegion& region = *instance.region;

    Manifest manifest;
    manifest.config = config;
    manifest.beta_resolved = instance.beta_resolved;

    if (const std::optional<double> exact = analytic_f_star(config, instance)) {
      manifest.f_star_source = "analytic";
      manifest.f_star = *exact;
      manifest.certified_lower = *exact;
    } else {
      const ReferenceOptimum ref =
          reference_optimum(obj, region, config.reference_budget);
      manifest.f_star_source = "reference";
      manifest.f_star = ref.f_star_estimate;
      manifest.certified_lower = ref.certified_lower;
    }

    fs::create_directories(config.out_dir);
    const long t_lo = std::max<long>(10, config.T / 100);

    // Instance-independent vertex start: the default start (LMO at the center
    // gradient) coincides with the constrained optimum on A = I exterior
    // l2 instances, which would flatten every trace.
    const Vector x0 = canonical_vertex_start(region);

    for (const std::string& spec : config.schedules) {
      const Schedule schedule = Schedule::parse(spec);
      SolverOptions options;
      options.x0 = x0;
      options.f_star = manifest.f_star;
      options.seed = config.seed;
      const Trace trace = fw_run(obj, region, schedule, config.T, options);

      const fs::path trace_path =
          fs::path(config.out_dir) / ("trace_" + sanitize(spec) + ".csv");
      {
        std::ofstream out(trace_path);
        if (!out) throw DataError("run_experiment: cannot write " + trace_path.string());
        trace.write_csv(out);
      }
      created.push_back(trace_path);
      manifest.files.push_back(trace_path.string());

      const long t_hi = std::min<long>(config.T, static_cast<long>(trace.records.size()));
      for (const Measure measure :
           {Measure::Gap, Measure::PrimalDual, Measure::Subopt}) {
        SummaryRow row;
        row.schedule = spec;
        row.measure = measure_name(measure);
        row.final_value = measure_value(trace.records.back(), measure);
        try {
          const SlopeFit fit = fit_rate_slope(trace, measure, t_lo, t_hi);
          row.slope = fit.slope;
          row.r_squared = fit.r_squared;
        } catch (const InsufficientDataError&) {
          row.slope = std::numeric_limits<double>::quiet_NaN();
          row.r_squared = std::numeric_limits<double>::quiet_NaN();
        } catch (const InvalidParameterError&) {
          // Horizon too short for the tail window; traces are still valid.
          row.slope = std::numeric_limits<double>::quiet_NaN();
          row.r_squared = std::numeric_limits<double>::quiet_NaN();
        }
        manifest.summary.push_back(row);
      }
    }

    const fs::path summary_path = fs::path(config.out_dir) / "summary.csv";
    {
      std::ofstream out(summary_path);
      if (!out) throw DataError("run_experiment: cannot write " + summary_path.string());
      write_summary_csv(out, manifest.summary);
    }
    created.push_back(summary_path);
    manifest.files.push_back(summary_path.string());

    // O(t^-2) guide for log-log plots, equal to 1 at the fit window start.
    const fs::path guide_path = fs::path(config.out_dir) / "reference_t2.csv";
    {
      std::ofstream out(guide_path);
      if (!out) throw DataError("run_experiment: cannot write " + guide_path.string());
      out << "t,value\n";
      for (long t = t_lo; t < config.T; ++t) {
        out << t << ',' << format_double(double(t_lo) * double(t_lo) / (double(t) * double(t)))
            << '\n';
      }
    }
    created.push_back(guide_path);
    manifest.files.push_back(guide_path.string());

    nlohmann::json doc;
    doc["problem"] = config.problem == ProblemKind::Synthetic    ? "synthetic"
                     : config.problem == ProblemKind::Regression ? "regression"
                                                                 : "completion";
    if (config.problem == ProblemKind::Synthetic) {
      doc["kind"] = config.synth_kind == SynthKind::Identity ? "identity" : "gaussian";
      doc["m"] = config.m;
      doc["n"] = config.n;
    } else {
      doc["dataset"] = config.dataset;
      if (!config.target_column.empty()) doc["target"] = config.target_column;
    }
    doc["seed"] = config.seed;
    if (config.problem != ProblemKind::Completion) doc["p"] = config.p;
    if (config.beta) doc["beta"] = *config.beta;
    if (config.beta_factor) doc["beta_factor"] = *config.beta_factor;
    doc["beta_resolved"] = manifest.beta_resolved;
    if (config.problem == ProblemKind::Completion) {
      doc["rho"] = config.rho;
      if (config.max_users) doc["max_users"] = *config.max_users;
      if (config.max_items) doc["max_items"] = *config.max_items;
    }
    doc["schedules"] = config.schedules;
    doc["T"] = config.T;
    doc["ref_budget"] = config.reference_budget;
    doc["f_star"] = {{"source", manifest.f_star_source},
                     {"estimate", manifest.f_star},
                     {"certified_lower", manifest.certified_lower}};
    doc["files"] = manifest.files;

    const fs::path manifest_path = fs::path(config.out_dir) / "manifest.json";
    {
      std::ofstream out(manifest_path);
      if (!out) throw DataError("run_experiment: cannot write " + manifest_path.string());
      out << doc.dump(2) << '\n';
    }
    manifest.manifest_path = manifest_path.string();
    return manifest;
  } catch (...) {
    cleanup();
    throw;
  }
}

}  // namespace fw
