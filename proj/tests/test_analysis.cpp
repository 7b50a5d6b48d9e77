#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <sstream>

#include "fw/analysis.hpp"
#include "fw/datasets.hpp"
#include "fw/errors.hpp"

using fw::CertifyOptions;
using fw::GrowthMode;
using fw::Index;
using fw::LpBall;
using fw::Matrix;
using fw::Measure;
using fw::RateEnvelope;
using fw::RegressionObjective;
using fw::Schedule;
using fw::Vector;

namespace {

// Identity regression instance with the target scaled to a given norm.
struct IdentityInstance {
  RegressionObjective obj;
  LpBall ball;
  double f_star;

  static IdentityInstance make(Index n, unsigned seed, double beta_factor,
                               double y_norm = 0.0) {
    fw::SynthRegression sr = fw::synth_regression(seed, n, n, fw::SynthKind::Identity);
    Vector y = sr.y;
    if (y_norm > 0.0) y *= y_norm / y.norm();
    const double beta = beta_factor * y.norm();
    double f_star = 0.0;
    if (beta_factor < 1.0) {
      const double d = y.norm() - beta;
      f_star = 0.5 * d * d;
    }
    return IdentityInstance{RegressionObjective(Matrix::Identity(n, n), y),
                            LpBall(2.0, beta, n), f_star};
  }
};

fw::Trace synthetic_trace(long T, const std::function<double(long)>& measure) {
  fw::Trace trace;
  for (long t = 0; t < T; ++t) {
    fw::IterationRecord rec;
    rec.t = t;
    const double m = measure(t);
    rec.gap = m;
    rec.primaldual = m;
    rec.subopt = m;
    trace.records.push_back(rec);
  }
  return trace;
}

}  // namespace

TEST_CASE("certify_growth: exterior l2 instance has a finite strong (M,1) constant") {
  IdentityInstance inst = IdentityInstance::make(6, 3, 0.5);
  CertifyOptions options;
  options.f_star = inst.f_star;
  const fw::GrowthCertificate cert = fw::certify_growth(
      inst.obj, inst.ball, GrowthMode::Strong, 1.0, 100, 16, 7, options);
  CHECK(cert.M_hat > 0.0);
  CHECK(std::isfinite(cert.M_hat));
  CHECK(cert.violations_at_M_hat == 0);
  CHECK(cert.samples > 0);
  CHECK(cert.eta_grid == 16);
}

TEST_CASE("certify_growth: constant objective is degenerate") {
  const fw::QuadraticObjective constant(Matrix::Zero(3, 3), Vector::Zero(3));
  const LpBall ball(2.0, 1.0, 3);
  CHECK_THROWS_AS(fw::certify_growth(constant, ball, GrowthMode::Strong, 0.0,
                                     50, 16, 1),
                  fw::DegenerateInstanceError);
}

TEST_CASE("certify_growth: doubling M keeps zero violations (monotone in M)") {
  IdentityInstance inst = IdentityInstance::make(5, 9, 0.5);
  const fw::GrowthCertificate cert = fw::certify_growth(
      inst.obj, inst.ball, GrowthMode::Strong, 0.0, 60, 16, 5);
  // Same seed, same samples: every ratio <= M_hat < 2 M_hat.
  const double rate = fw::revalidate_certificate(inst.obj, inst.ball, cert, 60,
                                                 16, 5, 2.0);
  CHECK(rate == 0.0);
}

TEST_CASE("certify_growth argument validation") {
  IdentityInstance inst = IdentityInstance::make(4, 2, 0.5);
  CHECK_THROWS_AS(fw::certify_growth(inst.obj, inst.ball, GrowthMode::Strong,
                                     0.0, 5, 16, 1),
                  fw::InvalidParameterError);
  CHECK_THROWS_AS(fw::certify_growth(inst.obj, inst.ball, GrowthMode::Strong,
                                     0.0, 50, 5, 1),
                  fw::InvalidParameterError);
  // Weak mode requires an f* source.
  CHECK_THROWS_AS(fw::certify_growth(inst.obj, inst.ball, GrowthMode::Weak,
                                     0.5, 50, 16, 1),
                  fw::InvalidParameterError);
}

TEST_CASE("strong_rate_bound base case equals the anchored value") {
  // fixed:2, S=1, eps=1, r=0, M=1, anchor 1, t=1:
  // max{1 * (eta_0/eta_0)^1, (g(0)/2)^1 * eta_0^k} = max{1, 1} = 1.
  const RateEnvelope env(GrowthMode::Strong, Schedule::fixed(2.0), 1, 1.0, 1.0, 0.0);
  CHECK(fw::strong_rate_bound(env, 1.0, 1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("exponent k: arithmetic across modes and parameters") {
  // Strong: k = min{g(S)-eps, 1/(1-r)}.
  CHECK(RateEnvelope(GrowthMode::Strong, Schedule::fixed(2.0), 1, 1.0, 1.0, 0.0).k() ==
        doctest::Approx(1.0));
  CHECK(RateEnvelope(GrowthMode::Strong, Schedule::fixed(4.0), 1, 1.0, 1.0, 0.5).k() ==
        doctest::Approx(2.0));
  // Weak adds the cap at 2: fixed:4, eps=1, r=0 -> min{3, 1, 2} = 1.
  CHECK(RateEnvelope(GrowthMode::Weak, Schedule::fixed(4.0), 1, 1.0, 1.0, 0.0).k() ==
        doctest::Approx(1.0));
  // r=0.5 with g(S)-eps >= 2 -> k = 2.
  CHECK(RateEnvelope(GrowthMode::Weak, Schedule::fixed(7.0), 1, 1.0, 1.0, 0.5).k() ==
        doctest::Approx(2.0));

  // Log-adaptive with S = ceil(exp(1/(1-r))) and eps = 1: g(S)-eps >= 1/(1-r),
  // so k = 1/(1-r).
  for (const double r : {0.0, 0.3, 0.5}) {
    const long S = static_cast<long>(std::ceil(std::exp(1.0 / (1.0 - r))));
    const RateEnvelope env(GrowthMode::Strong, Schedule::log_adaptive(), S, 1.0, 1.0, r);
    CHECK(env.k() == doctest::Approx(1.0 / (1.0 - r)).epsilon(1e-12));
  }

  // Random parameter triples: k matches the min formula exactly.
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int rep = 0; rep < 100; ++rep) {
    const double ell = 2.0 + 6.0 * u(rng);
    const double eps = 0.05 + (ell - 0.1) * u(rng);
    const double r = 0.95 * u(rng);
    const RateEnvelope strong(GrowthMode::Strong, Schedule::fixed(ell), 1, eps, 1.0, r);
    CHECK(strong.k() == doctest::Approx(std::min(ell - eps, 1.0 / (1.0 - r))).epsilon(1e-14));
    const RateEnvelope weak(GrowthMode::Weak, Schedule::fixed(ell), 1, eps, 1.0, r);
    CHECK(weak.k() ==
          doctest::Approx(std::min({ell - eps, 1.0 / (1.0 - r), 2.0})).epsilon(1e-14));
  }
}

TEST_CASE("weak_rate_bound at t = S dominates the anchor") {
  for (const double anchor : {0.3, 1.0, 50.0}) {
    const RateEnvelope env(GrowthMode::Weak, Schedule::fixed(4.0), 3, 1.0, 0.7, 0.5);
    CHECK(fw::weak_rate_bound(env, anchor, 3) >= anchor);
  }
}

TEST_CASE("rate envelope argument validation") {
  CHECK_THROWS_AS(RateEnvelope(GrowthMode::Strong, Schedule::fixed(2.0), 0, 1.0, 1.0, 0.0),
                  fw::InvalidParameterError);
  CHECK_THROWS_AS(RateEnvelope(GrowthMode::Strong, Schedule::fixed(2.0), 1, 2.5, 1.0, 0.0),
                  fw::InvalidParameterError);
  CHECK_THROWS_AS(RateEnvelope(GrowthMode::Strong, Schedule::fixed(2.0), 1, 1.0, 1.0, 1.0),
                  fw::InvalidParameterError);
  CHECK_THROWS_AS(RateEnvelope(GrowthMode::Strong, Schedule::fixed(2.0), 1, 1.0, -1.0, 0.0),
                  fw::InvalidParameterError);
  const RateEnvelope strong(GrowthMode::Strong, Schedule::fixed(2.0), 1, 1.0, 1.0, 0.0);
  CHECK_THROWS_AS(fw::weak_rate_bound(strong, 1.0, 1), fw::InvalidParameterError);
  CHECK_THROWS_AS(strong.bound_at(0, 1.0), fw::InvalidParameterError);
}

TEST_CASE("bounds are non-increasing in t on the supported configurations") {
  std::vector<RateEnvelope> envelopes;
  for (const double ell : {2.0, 4.0, 7.0}) {
    for (const double r : {0.0, 0.5}) {
      for (const double eps : {0.5, 1.0, ell - 0.5}) {
        envelopes.emplace_back(GrowthMode::Strong, Schedule::fixed(ell), 1, eps, 2.0, r);
        envelopes.emplace_back(GrowthMode::Weak, Schedule::fixed(ell), 1, eps, 2.0, r);
        envelopes.emplace_back(GrowthMode::Strong, Schedule::fixed(ell), 5, eps, 2.0, r);
      }
    }
  }
  // Log-adaptive at the canonical S = ceil(exp(1/(1-r))), eps = 1.
  for (const double r : {0.0, 0.3, 0.5, 0.7}) {
    const long S = static_cast<long>(std::ceil(std::exp(1.0 / (1.0 - r))));
    envelopes.emplace_back(GrowthMode::Strong, Schedule::log_adaptive(), S, 1.0, 2.0, r);
    envelopes.emplace_back(GrowthMode::Weak, Schedule::log_adaptive(), S, 1.0, 2.0, r);
  }
  for (const RateEnvelope& env : envelopes) {
    double prev = env.bound_at(env.S(), 1.0);
    for (long t = env.S() + 1; t <= 10000; t = t < 100 ? t + 1 : t + 37) {
      const double cur = env.bound_at(t, 1.0);
      REQUIRE(cur <= prev * (1.0 + 1e-12));
      prev = cur;
    }
  }
}

TEST_CASE("check_trace_against_bound: certified instance has zero violations") {
  IdentityInstance inst = IdentityInstance::make(8, 1, 1.05, 10.0);
  CertifyOptions copt;
  copt.f_star = 0.0;
  copt.trajectory_schedule = Schedule::fixed(7.0);
  copt.trajectory_T = 300;
  copt.trajectory_x0 = fw::canonical_vertex_start(inst.ball);
  const fw::GrowthCertificate cert = fw::certify_growth(
      inst.obj, inst.ball, GrowthMode::Weak, 0.5, 200, 32, 11, copt);

  fw::SolverOptions opt;
  opt.f_star = 0.0;
  opt.x0 = fw::canonical_vertex_start(inst.ball);
  const fw::Trace trace = fw::fw_run(inst.obj, inst.ball, Schedule::fixed(7.0), 300, opt);

  const RateEnvelope env(GrowthMode::Weak, Schedule::fixed(7.0), 1, 4.0, cert.M_hat, 0.5);
  CHECK(fw::check_trace_against_bound(trace, env, Measure::Subopt).empty());

  // A wildly undersized M must be reported, not masked.
  const RateEnvelope tiny(GrowthMode::Weak, Schedule::fixed(7.0), 1, 4.0,
                          cert.M_hat / 100.0, 0.5);
  CHECK(!fw::check_trace_against_bound(trace, tiny, Measure::Subopt).empty());
}

TEST_CASE("certificate stability: fresh seed, 5% margin, <= 1% violations") {
  IdentityInstance inst = IdentityInstance::make(8, 5, 1.5);
  CertifyOptions copt;
  copt.f_star = 0.0;
  const fw::GrowthCertificate cert = fw::certify_growth(
      inst.obj, inst.ball, GrowthMode::Weak, 0.5, 200, 32, 3, copt);
  const double rate =
      fw::revalidate_certificate(inst.obj, inst.ball, cert, 200, 32, 4, 1.05, copt);
  CHECK(rate <= 0.01);
}

TEST_CASE("fit_rate_slope recovers planted power laws") {
  const fw::Trace quad = synthetic_trace(2000, [](long t) {
    return t == 0 ? 1.0 : std::pow(double(t), -2.0);
  });
  const fw::SlopeFit f2 = fw::fit_rate_slope(quad, Measure::Subopt, 10, 2000);
  CHECK(f2.slope == doctest::Approx(-2.0).epsilon(1e-9));
  CHECK(f2.r_squared == doctest::Approx(1.0).epsilon(1e-12));

  const fw::Trace scaled = synthetic_trace(2000, [](long t) {
    return t == 0 ? 5.0 : 5.0 * std::pow(double(t), -1.0);
  });
  const fw::SlopeFit f1 = fw::fit_rate_slope(scaled, Measure::Gap, 10, 2000);
  CHECK(f1.slope == doctest::Approx(-1.0).epsilon(1e-9));
  CHECK(f1.intercept == doctest::Approx(std::log(5.0)).epsilon(1e-9));

  for (const double alpha : {-1.0, -2.0, -4.0}) {
    const fw::Trace planted = synthetic_trace(1500, [alpha](long t) {
      return t == 0 ? 1.0 : std::pow(double(t), alpha);
    });
    const fw::SlopeFit fit = fw::fit_rate_slope(planted, Measure::PrimalDual, 20, 1500);
    CHECK(fit.slope == doctest::Approx(alpha).epsilon(1e-6));
  }
}

TEST_CASE("certificate and violation CSV serialization") {
  fw::GrowthCertificate cert;
  cert.mode = GrowthMode::Weak;
  cert.r = 0.5;
  cert.M_hat = 3.25;
  cert.samples = 90;
  cert.skipped = 10;
  cert.eta_grid = 64;
  cert.violations_at_M_hat = 0;
  cert.max_sample = 17;
  cert.max_eta = 0.25;
  std::ostringstream cert_out;
  fw::write_certificate_csv(cert_out, cert);
  CHECK(cert_out.str() ==
        "mode,r,M_hat,samples,skipped,eta_grid,violations_at_M_hat,max_sample,max_eta\n"
        "weak,0.5,3.25,90,10,64,0,17,0.25\n");

  std::ostringstream viol_out;
  fw::write_violations_csv(viol_out, {{12, 0.5, 0.25}, {13, 0.75, 0.5}});
  CHECK(viol_out.str() == "t,measured,bound\n12,0.5,0.25\n13,0.75,0.5\n");
}

TEST_CASE("fit_rate_slope validation and data requirements") {
  const fw::Trace trace = synthetic_trace(100, [](long) { return -1.0; });
  // All values non-positive: no usable samples.
  CHECK_THROWS_AS(fw::fit_rate_slope(trace, Measure::Subopt, 10, 100),
                  fw::InsufficientDataError);
  const fw::Trace ok = synthetic_trace(100, [](long t) { return 1.0 / (1.0 + t); });
  CHECK_THROWS_AS(fw::fit_rate_slope(ok, Measure::Subopt, 0, 50), fw::InvalidParameterError);
  CHECK_THROWS_AS(fw::fit_rate_slope(ok, Measure::Subopt, 30, 55), fw::InvalidParameterError);
  CHECK_THROWS_AS(fw::fit_rate_slope(ok, Measure::Subopt, 10, 500), fw::InvalidParameterError);

  fw::Trace no_subopt = synthetic_trace(100, [](long t) { return 1.0 / (1.0 + t); });
  for (auto& rec : no_subopt.records) rec.subopt.reset();
  CHECK_THROWS_AS(fw::fit_rate_slope(no_subopt, Measure::Subopt, 10, 100),
                  fw::InvalidParameterError);
}
