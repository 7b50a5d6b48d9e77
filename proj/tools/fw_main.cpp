// fw: Frank-Wolfe experiment runner.
//
//   fw run     --config <file> [--schedule s1,s2,...] [--T n] [--out dir] [--seed k]
//   fw certify --config <file> --mode strong|weak --r <r> [--samples n] [--eta-grid n] [--seed k]
//   fw lemma   --schedule <spec> --S <s> --eps <e> --t <t>
//
// Exit codes: 0 success, 1 usage/config error, 2 data error,
// 3 numerical inconsistency.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "fw/analysis.hpp"
#include "fw/errors.hpp"
#include "fw/experiment.hpp"

namespace {

int run_command(const std::string& config_path, const fw::ConfigOverrides& overrides) {
  fw::ExperimentConfig config = fw::load_config(config_path);
  fw::apply_overrides(config, overrides);
  const fw::Manifest manifest = fw::run_experiment(config);
  std::cout << "wrote " << manifest.manifest_path << " ("
            << manifest.files.size() << " output files, beta="
            << manifest.beta_resolved << ", f* " << manifest.f_star_source
            << "=" << manifest.f_star << ")\n";
  for (const fw::SummaryRow& row : manifest.summary) {
    std::printf("  %-14s %-10s final=%-13.6g slope=%-8.3f r2=%.4f\n",
                row.schedule.c_str(), row.measure.c_str(), row.final_value,
                row.slope, row.r_squared);
  }
  return 0;
}

int certify_command(const std::string& config_path, const std::string& mode_name,
                    double r, long n_samples, long n_eta, unsigned seed,
                    const std::string& out_path,
                    const fw::ConfigOverrides& overrides) {
  fw::ExperimentConfig config = fw::load_config(config_path);
  fw::apply_overrides(config, overrides);
  fw::ExperimentInstance instance = fw::build_instance(config);

  const fw::GrowthMode mode = mode_name == "strong" ? fw::GrowthMode::Strong
                                                    : fw::GrowthMode::Weak;
  fw::CertifyOptions options;
  if (mode == fw::GrowthMode::Weak) {
    options.f_star = fw::reference_optimum(*instance.objective, *instance.region,
                                           config.reference_budget)
                         .f_star_estimate;
  }
  const fw::GrowthCertificate cert =
      fw::certify_growth(*instance.objective, *instance.region, mode, r,
                         n_samples, n_eta, seed, options);
  std::printf("mode=%s r=%g M_hat=%.10g samples=%ld skipped=%ld eta_grid=%ld "
              "violations_at_M_hat=%ld max_at=(sample %ld, eta %.6g)\n",
              mode_name.c_str(), cert.r, cert.M_hat, cert.samples, cert.skipped,
              cert.eta_grid, cert.violations_at_M_hat, cert.max_sample,
              cert.max_eta);
  if (!out_path.empty()) {
    std::ofstream out(out_path);
    if (!out) throw fw::DataError("certify: cannot write " + out_path);
    fw::write_certificate_csv(out, cert);
    std::printf("wrote %s\n", out_path.c_str());
  }
  return 0;
}

int lemma_command(const std::string& schedule_spec, long S, double eps, long t) {
  const fw::Schedule schedule = fw::Schedule::parse(schedule_spec);
  const fw::ProductBoundCheck check =
      fw::cumulative_product_check(schedule, S, eps, t);
  std::printf("schedule=%s S=%ld eps=%g t=%ld\n", schedule_spec.c_str(), S, eps, t);
  std::printf("lhs=%.17g rhs=%.17g (log lhs=%.12g, log rhs=%.12g) -> %s\n",
              check.lhs, check.rhs, check.log_lhs, check.log_rhs,
              check.satisfied ? "satisfied" : "VIOLATED");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Frank-Wolfe solver with open-loop step-size schedules"};
  app.require_subcommand(1);

  std::string config_path;
  fw::ConfigOverrides overrides;
  std::string schedule_list;
  long T = 0;
  std::string out_dir;
  unsigned seed = 0;

  auto* run = app.add_subcommand("run", "run the experiment matrix from a config");
  run->add_option("--config", config_path, "key=value config file")->required();
  auto* run_sched = run->add_option("--schedule", schedule_list,
                                    "comma-separated schedule specs");
  auto* run_T = run->add_option("--T", T, "iteration horizon");
  auto* run_out = run->add_option("--out", out_dir, "output directory");
  auto* run_seed = run->add_option("--seed", seed, "instance seed");

  std::string mode = "strong";
  double r = 0.0;
  long n_samples = 200;
  long n_eta = 64;
  unsigned cert_seed = 1;
  std::string cert_out;
  auto* certify = app.add_subcommand("certify", "sample an (M, r) growth certificate");
  certify->add_option("--config", config_path, "key=value config file")->required();
  certify->add_option("--mode", mode, "strong|weak")
      ->check(CLI::IsMember({"strong", "weak"}))
      ->required();
  certify->add_option("--r", r, "growth exponent r in [0, 1]")->required();
  certify->add_option("--samples", n_samples, "sample count (>= 10)");
  certify->add_option("--eta-grid", n_eta, "step-length grid size (>= 10)");
  certify->add_option("--seed", cert_seed, "sampling seed");
  certify->add_option("--out", cert_out, "write the certificate as CSV");

  std::string lemma_schedule;
  long lemma_S = 1;
  double lemma_eps = 1.0;
  long lemma_t = 100;
  auto* lemma = app.add_subcommand("lemma", "evaluate the cumulative-product bound");
  lemma->add_option("--schedule", lemma_schedule, "schedule spec")->required();
  lemma->add_option("--S", lemma_S, "start index (>= 1)")->required();
  lemma->add_option("--eps", lemma_eps, "epsilon in ]0, g(S)[")->required();
  lemma->add_option("--t", lemma_t, "end index (>= S)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (run_sched->count()) overrides.schedules = schedule_list;
  if (run_T->count()) overrides.T = T;
  if (run_out->count()) overrides.out_dir = out_dir;
  if (run_seed->count()) overrides.seed = seed;

  try {
    if (run->parsed()) return run_command(config_path, overrides);
    if (certify->parsed()) {
      return certify_command(config_path, mode, r, n_samples, n_eta, cert_seed,
                             cert_out, overrides);
    }
    if (lemma->parsed()) return lemma_command(lemma_schedule, lemma_S, lemma_eps, lemma_t);
  } catch (const fw::NumericalInconsistencyError& e) {
    std::cerr << "numerical inconsistency: " << e.what() << "\n";
    return 3;
  } catch (const fw::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const fw::InvalidParameterError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
