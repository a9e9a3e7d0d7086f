#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "frechet/io.hpp"
#include "frechet/mclab.hpp"
#include "test_helpers.hpp"

using namespace frechet;

namespace {

ExperimentConfig gaussian_config(long replicates, std::vector<long> n_grid) {
  ExperimentConfig config;
  config.experiment_id = "unit_gaussian";
  auto space = std::make_shared<EuclideanSpace>(5);
  config.space = space;
  config.sampler =
      std::make_shared<GaussianSampler>(space, space->point(Vector::Zero(5)), 1.0);
  config.estimator = EstimatorKind::empirical;
  config.method = SolveMethod::exact;
  config.n_grid = std::move(n_grid);
  config.replicates = replicates;
  config.seed = 20260810;
  config.tail = TailBoundKind::subgaussian;
  config.delta = 0.1;
  return config;
}

}  // namespace

TEST_CASE("hilbert rate: mse matches sigma^2/n within 3 standard errors") {
  ExperimentConfig config = gaussian_config(400, {10, 40});
  const ExperimentResult result = run_error_experiment(config);
  REQUIRE(result.rows.size() == 2);
  CHECK(result.sigma2_hat == 5.0);  // closed form, no MC pass
  for (const SummaryRow& row : result.rows) {
    const double target = 5.0 / static_cast<double>(row.n);
    CHECK(std::abs(row.mse - target) <= 3.0 * row.mse_stderr);
    CHECK(row.flags == 0);
    CHECK(row.q50 <= row.q90);
    CHECK(row.q90 <= row.q99);
    CHECK(row.exceedance >= 0.0);
    CHECK(row.exceedance <= 1.0);
  }
}

TEST_CASE("summary rows are bit-identical across worker counts") {
  ExperimentConfig config = gaussian_config(60, {5, 17});
  setenv("FRECHET_THREADS", "4", 1);
  const std::string csv_parallel = results_csv_string(run_error_experiment(config).rows);
  setenv("FRECHET_THREADS", "0", 1);
  const std::string csv_sequential = results_csv_string(run_error_experiment(config).rows);
  unsetenv("FRECHET_THREADS");
  CHECK(csv_parallel == csv_sequential);

  // And across repeated runs with the default worker count.
  CHECK(results_csv_string(run_error_experiment(config).rows) == csv_parallel);
}

TEST_CASE("tail coverage bookkeeping") {
  std::vector<double> errors{0.1, 0.2, 0.3, 0.4};
  SUBCASE("infinite bound never exceeds") {
    const TailCoverageReport r = check_tail_coverage(errors, kInfinity, 0.1);
    CHECK(r.exceedance == 0.0);
    CHECK(r.pass);
  }
  SUBCASE("zero bound always exceeds") {
    const TailCoverageReport r = check_tail_coverage(errors, 0.0, 0.1);
    CHECK(r.exceedance == 1.0);
    CHECK_FALSE(r.pass);
  }
  SUBCASE("threshold uses the binomial slack") {
    const TailCoverageReport r = check_tail_coverage(errors, 0.25, 0.5);
    CHECK(r.exceedance == doctest::Approx(0.5));
    CHECK(r.threshold == doctest::Approx(0.5 + 3.0 * std::sqrt(0.25 / 4.0)));
    CHECK(r.pass);
  }
}

TEST_CASE("CAT(0) hoeffding coverage on the two-point sampler") {
  ExperimentConfig config;
  config.experiment_id = "two_point_tail";
  auto space = std::make_shared<EuclideanSpace>(1);
  config.space = space;
  const Point origin = space->point(Vector::Zero(1));
  config.sampler = std::make_shared<TwoPointSampler>(
      space, origin, TangentVector{origin, Vector::Unit(1, 0)}, 1.0);
  config.estimator = EstimatorKind::empirical;
  config.n_grid = {100};
  config.replicates = 500;
  config.seed = 77;
  config.tail = TailBoundKind::hoeffding;
  config.delta = 0.1;
  const ExperimentResult result = run_error_experiment(config);
  const TailCoverageReport cover =
      check_tail_coverage(result.distance_errors[0], result.rows[0].tail_bound, 0.1);
  CHECK(cover.pass);
  CHECK(result.rows[0].exceedance <= 0.1 + 3.0 * std::sqrt(0.1 * 0.9 / 500.0));
}

TEST_CASE("log-log slope of a 1/n law is -1") {
  std::vector<SummaryRow> rows(3);
  rows[0].n = 10;
  rows[0].mse = 0.5;
  rows[1].n = 100;
  rows[1].mse = 0.05;
  rows[2].n = 1000;
  rows[2].mse = 0.005;
  CHECK(loglog_slope(rows) == doctest::Approx(-1.0).epsilon(1e-12));
}

TEST_CASE("figure-1 regression") {
  const Figure1Report report = figure1_regression({1, 10, 100}, 5150);
  REQUIRE(report.entries.size() == 3);

  // Hand simulation for p = 1: midpoint of A,B is the root, then one third
  // of the way toward C.
  CHECK(report.entries[0].adversarial_distance == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  const double at10 = report.entries[1].adversarial_distance;
  const double at100 = report.entries[2].adversarial_distance;
  CHECK(std::abs(at100 - at10) < 0.1 * std::max(at10, at100));
  CHECK(report.non_vanishing);
  CHECK(at100 >= 0.1);

  // Exploratory: a random permutation typically lands far closer to the root.
  CHECK(report.entries[2].permutation_q50 < at100);
}

TEST_CASE("expectation-bound check on the iterated estimator (Sturm regime)") {
  ExperimentConfig config = gaussian_config(400, {10, 40});
  config.estimator = EstimatorKind::iterated;
  config.schedule = StepSchedule::harmonic();
  config.check_expectation_bound = true;
  config.tail = TailBoundKind::iterated_hoeffding;
  const ExperimentResult result = run_error_experiment(config);
  // Iterated harmonic in a Hilbert space IS the mean: bound sigma^2/n holds.
  for (const SummaryRow& row : result.rows)
    CHECK(row.exp_bound == doctest::Approx(5.0 / static_cast<double>(row.n)));
  const auto outcomes = evaluate_checks(config, result);
  REQUIRE(!outcomes.empty());
  CHECK(outcomes.front().pass);
}

TEST_CASE("config parsing") {
  SUBCASE("round trip through the documented schema") {
    const std::string text = R"({
      "experiment_id": "parse_check",
      "space": {"kind": "euclidean", "dim": 2},
      "sampler": {"kind": "gaussian", "sigma": 0.5, "center": [0.0, 0.0]},
      "estimator": {"kind": "empirical", "method": "exact"},
      "n_grid": [4, 8],
      "replicates": 10,
      "seed": 99,
      "delta": 0.1,
      "tail": "subgaussian",
      "checks": {"expectation_bound": true}
    })";
    const ExperimentConfig config = parse_experiment_config(text);
    CHECK(config.experiment_id == "parse_check");
    CHECK(config.n_grid == std::vector<long>{4, 8});
    CHECK(config.check_expectation_bound);
    const ExperimentResult result = run_error_experiment(config);
    CHECK(result.rows.size() == 2);
  }
  SUBCASE("figure-1 fixed point set with the PAC estimator") {
    const std::string text = R"({
      "experiment_id": "figure1_pac",
      "points": {"kind": "figure1", "p": 2},
      "estimator": {"kind": "stochastic-approx", "eps": 0.3, "delta": 0.2, "budget": "bernstein"},
      "n_grid": [6],
      "replicates": 25,
      "seed": 11,
      "delta": 0.2,
      "tail": "pac"
    })";
    const ExperimentConfig config = parse_experiment_config(text);
    REQUIRE(config.fixed_points.size() == 6);
    const ExperimentResult result = run_error_experiment(config);
    CHECK(result.rows[0].tail_bound == 0.3);
    // The fixed set's barycenter is the root; most PAC runs land within eps.
    CHECK(result.rows[0].exceedance <= 0.2 + 3.0 * std::sqrt(0.2 * 0.8 / 25.0));
  }
  SUBCASE("schema violations carry field paths") {
    CHECK_THROWS_WITH_AS(parse_experiment_config("{}"), doctest::Contains("space"), IoError);
    CHECK_THROWS_WITH_AS(parse_experiment_config(R"({
        "space": {"kind": "euclidean", "dim": 2},
        "sampler": {"kind": "gaussian", "sigma": 1.0, "center": [0,0]},
        "estimator": {"kind": "empirical"},
        "n_grid": [],
        "replicates": 1,
        "seed": 1
      })"),
                         doctest::Contains("n_grid"), IoError);
    // A config without a seed parses but refuses to run.
    const ExperimentConfig no_seed = parse_experiment_config(R"({
        "space": {"kind": "euclidean", "dim": 2},
        "sampler": {"kind": "gaussian", "sigma": 1.0, "center": [0,0]},
        "estimator": {"kind": "empirical"},
        "n_grid": [4],
        "replicates": 1
      })");
    CHECK_THROWS_WITH_AS(run_error_experiment(no_seed), doctest::Contains("seed"),
                         std::invalid_argument);
  }
  SUBCASE("invalid domains are refused at run time") {
    const std::string text = R"({
      "experiment_id": "bad_domain",
      "space": {"kind": "sphere", "kappa": 1.0, "dim": 2},
      "domain": {"epsilon": 0.2, "radius": 1.5},
      "sampler": {"kind": "uniform-cap", "radius": 0.3, "center": [0.0, 0.0, 1.0]},
      "estimator": {"kind": "empirical", "method": "gradient"},
      "n_grid": [4],
      "replicates": 2,
      "seed": 3
    })";
    CHECK_THROWS_WITH_AS(run_error_experiment(parse_experiment_config(text)),
                         doctest::Contains("invalid convex domain"), std::invalid_argument);
  }
}

TEST_CASE("results CSV schema") {
  ExperimentConfig config = gaussian_config(5, {3});
  const ExperimentResult result = run_error_experiment(config);
  const std::string csv = results_csv_string(result.rows);
  CHECK(csv.substr(0, csv.find('\n')) ==
        "experiment_id,space,kappa,epsilon,estimator,n,replicates,mse,mse_stderr,"
        "q50,q90,q99,exp_bound,tail_bound,delta,exceedance,flags,seed");
  CHECK(csv.find("unit_gaussian,euclidean,0,0,empirical,3,5,") != std::string::npos);
}
