#pragma once

#include <array>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frechet/estimators.hpp"

namespace frechet {

enum class EstimatorKind { empirical, iterated, parallel, stochastic_approx };

enum class TailBoundKind {
  none,
  subgaussian,
  hoeffding,
  bernstein,
  iterated_subgaussian,
  iterated_hoeffding,
  iterated_bernstein,
  parallel,
  pac
};

/// Sweep description: which space, which sampler (or fixed point set), which
/// estimator, the n grid, replicate count and master seed; every replicate's
/// stream is derived from (seed, n-index, replicate-index).
struct ExperimentConfig {
  std::string experiment_id = "experiment";

  std::shared_ptr<Space> space;
  std::shared_ptr<Sampler> sampler;           // exactly one of sampler /
  std::vector<Point> fixed_points;            // fixed_points is set

  EstimatorKind estimator = EstimatorKind::empirical;
  std::optional<SolveMethod> method;          // empirical / parallel batches
  StepSchedule schedule = StepSchedule::harmonic();
  long parallel_batches = 1;
  double approx_eps = 0.0;                    // stochastic-approx only
  double approx_delta = 0.0;
  BudgetKind approx_budget = BudgetKind::hoeffding;

  std::vector<long> n_grid;
  long replicates = 1;
  std::optional<std::uint64_t> seed;  // config value or the --seed flag; required to run

  double kappa = 0.0;                         // domain hypotheses
  std::optional<double> epsilon;
  std::optional<double> domain_radius;

  double delta = 0.1;                         // tail-bound confidence level
  TailBoundKind tail = TailBoundKind::none;
  long sigma2_mc_draws = 100000;
  SolverOptions solver;

  bool check_expectation_bound = false;
  bool check_tail_coverage = false;
  std::optional<std::array<double, 2>> slope_window;
};

/// Aggregated statistics for one grid value of n.
struct SummaryRow {
  std::string experiment_id;
  std::string space;
  double kappa = 0.0;
  double epsilon = 0.0;  // 0 when unused
  std::string estimator;
  long n = 0;
  long replicates = 0;
  double mse = 0.0;
  double mse_stderr = 0.0;
  double q50 = 0.0;  // quantiles of the squared error
  double q90 = 0.0;
  double q99 = 0.0;
  double exp_bound = kInfinity;
  double tail_bound = kInfinity;
  double delta = 0.0;
  double exceedance = 0.0;  // fraction of replicates with distance > tail_bound
  long flags = 0;
  std::uint64_t seed = 0;
};

struct TailCoverageReport {
  double exceedance = 0.0;
  double threshold = 0.0;  // delta + 3 sqrt(delta(1-delta)/R)
  bool pass = true;
};

/// Fraction of replicates whose (distance) error exceeds the bound; passes
/// iff it stays below delta + 3 sqrt(delta (1-delta) / R).
TailCoverageReport check_tail_coverage(const std::vector<double>& distance_errors, double bound,
                                       double delta);

struct ExperimentResult {
  std::vector<SummaryRow> rows;
  std::vector<std::vector<double>> distance_errors;  // per n, per replicate
  double sigma2_hat = 0.0;
  double sigma2_hat_stderr = 0.0;
  double sigma2_for_bounds = 0.0;  // sigma2_hat + 3 stderr (or exact closed form)
};

/// Runs the configured sweep. Replicates may execute on several workers
/// (FRECHET_THREADS caps the count, 0 forces sequential); results are
/// bit-identical for a fixed config and seed regardless of the worker count.
ExperimentResult run_error_experiment(const ExperimentConfig& config);

/// OLS slope of log(mse) against log(n).
double loglog_slope(const std::vector<SummaryRow>& rows);

struct Figure1Entry {
  int p = 0;
  double adversarial_distance = 0.0;
  double permutation_q50 = 0.0;
  double permutation_q90 = 0.0;
  double permutation_min = 0.0;
  double permutation_max = 0.0;
};

struct Figure1Report {
  std::vector<Figure1Entry> entries;
  bool non_vanishing = true;  // adversarial distance at max p >= 0.9x at min p
};

/// Equal-arm star instance: harmonic iterated barycenter distance to the
/// root for the adversarial leaf order and for 100 random permutations.
Figure1Report figure1_regression(const std::vector<int>& p_grid, std::uint64_t seed);

struct CheckOutcome {
  std::string name;
  bool pass = true;
  std::string detail;
};

/// Evaluates the checks enabled in the config against a finished run.
std::vector<CheckOutcome> evaluate_checks(const ExperimentConfig& config,
                                          const ExperimentResult& result);

/// Worker count honoring the FRECHET_THREADS environment variable
/// (0 = sequential).
int worker_count();

}  // namespace frechet
