#include "frechet/mclab.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <thread>

#include "frechet/bounds.hpp"

namespace frechet {

namespace {

/// Pairwise (cascading) summation keeps the aggregate independent of worker
/// scheduling and bounds round-off drift.
double pairwise_sum(const double* data, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += data[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise_sum(data, half) + pairwise_sum(data + half, n - half);
}

double quantile_sorted(const std::vector<double>& sorted, double q) {
  if (sorted.empty()) return 0.0;
  const double rank = q * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(rank));
  const std::size_t hi = std::min(sorted.size() - 1, lo + 1);
  const double frac = rank - std::floor(rank);
  return (1.0 - frac) * sorted[lo] + frac * sorted[hi];
}

std::string estimator_name(const ExperimentConfig& config) {
  switch (config.estimator) {
    case EstimatorKind::empirical: return "empirical";
    case EstimatorKind::iterated: return "iterated";
    case EstimatorKind::parallel:
      return "parallel(" + std::to_string(config.parallel_batches) + ")";
    case EstimatorKind::stochastic_approx: return "stochastic-approx";
  }
  return "?";
}

struct ReplicateOutcome {
  double distance = 0.0;
  bool flagged = false;
};

ReplicateOutcome run_replicate(const ExperimentConfig& config, const Point& b_star, long n,
                               Rng rng) {
  std::vector<Point> samples;
  if (!config.fixed_points.empty()) {
    samples = config.fixed_points;
  } else {
    samples.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) samples.push_back(config.sampler->sample(rng));
  }

  ReplicateOutcome out;
  switch (config.estimator) {
    case EstimatorKind::empirical: {
      const SolveMethod method = config.method.value_or(
          config.space->kind() == SpaceKind::euclidean
              ? SolveMethod::exact
              : (config.space->smooth() ? SolveMethod::gradient : SolveMethod::cyclic));
      SolverReport report = empirical_barycenter(*config.space, samples, method, config.solver);
      out.flagged = !report.converged;
      out.distance = config.space->distance(report.result, b_star);
      return out;
    }
    case EstimatorKind::iterated: {
      SolverReport report = iterated_barycenter(*config.space, samples, config.schedule);
      out.distance = config.space->distance(report.result, b_star);
      return out;
    }
    case EstimatorKind::parallel: {
      BatchPlan plan;
      plan.batches = config.parallel_batches;
      if (plan.batches < 1 || n % plan.batches != 0)
        throw std::invalid_argument("parallel estimator needs batches dividing n");
      plan.batch_size = n / plan.batches;
      Point est =
          parallel_barycenter(*config.space, samples, plan, config.method, config.solver);
      out.distance = config.space->distance(est, b_star);
      return out;
    }
    case EstimatorKind::stochastic_approx: {
      ApproxResult res =
          stochastic_barycenter_approx(*config.space, samples, config.approx_eps,
                                       config.approx_delta, config.approx_budget, rng());
      out.distance = config.space->distance(res.point, b_star);
      return out;
    }
  }
  throw std::invalid_argument("unknown estimator kind");
}

double tail_bound_for(const ExperimentConfig& config, long n, double sigma2) {
  bounds::BoundQuery q;
  q.n = n;
  q.kappa = config.kappa;
  q.epsilon = config.epsilon;
  q.sigma2 = sigma2;
  q.delta = config.delta;
  if (config.sampler) {
    const double r = config.sampler->support_radius();
    if (std::isfinite(r)) q.r = r;
    q.k2 = config.sampler->subgaussian_k2();
  }
  switch (config.tail) {
    case TailBoundKind::none: return kInfinity;
    case TailBoundKind::subgaussian: return bounds::empirical_tail_bound(q, bounds::TailFlavor::subgaussian);
    case TailBoundKind::hoeffding: return bounds::empirical_tail_bound(q, bounds::TailFlavor::hoeffding);
    case TailBoundKind::bernstein: return bounds::empirical_tail_bound(q, bounds::TailFlavor::bernstein);
    case TailBoundKind::iterated_subgaussian:
      return bounds::iterated_tail_bound_cat0(q, bounds::TailFlavor::subgaussian);
    case TailBoundKind::iterated_hoeffding:
      return bounds::iterated_tail_bound_cat0(q, bounds::TailFlavor::hoeffding);
    case TailBoundKind::iterated_bernstein:
      return bounds::iterated_tail_bound_cat0(q, bounds::TailFlavor::bernstein);
    case TailBoundKind::parallel:
      return parallel_tail_bound(config.kappa, config.epsilon.value_or(0.0), sigma2,
                                 q.k2.value_or(bounds::subgaussian_of_bounded(q.r.value_or(0.0))),
                                 n, config.delta);
    case TailBoundKind::pac: return config.approx_eps;
  }
  return kInfinity;
}

double expectation_bound_for(const ExperimentConfig& config, long n, double sigma2) {
  bounds::BoundQuery q;
  q.n = n;
  q.kappa = config.kappa;
  q.epsilon = config.epsilon;
  q.sigma2 = sigma2;
  switch (config.estimator) {
    case EstimatorKind::empirical: return bounds::empirical_expectation_bound(q);
    case EstimatorKind::iterated: return bounds::iterated_expectation_bound(q);
    default: return kInfinity;
  }
}

}  // namespace

int worker_count() {
  if (const char* env = std::getenv("FRECHET_THREADS")) {
    const long v = std::strtol(env, nullptr, 10);
    if (v <= 0) return 1;
    return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc == 0 ? 1 : static_cast<int>(hc);
}

TailCoverageReport check_tail_coverage(const std::vector<double>& distance_errors, double bound,
                                       double delta) {
  if (distance_errors.empty()) throw std::invalid_argument("no errors to check");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  const double r = static_cast<double>(distance_errors.size());
  long exceed = 0;
  for (double d : distance_errors)
    if (d > bound) ++exceed;
  TailCoverageReport report;
  report.exceedance = static_cast<double>(exceed) / r;
  report.threshold = delta + 3.0 * std::sqrt(delta * (1.0 - delta) / r);
  report.pass = report.exceedance <= report.threshold;
  return report;
}

ExperimentResult run_error_experiment(const ExperimentConfig& config) {
  if (!config.space) throw std::invalid_argument("config has no space");
  if (!config.sampler && config.fixed_points.empty())
    throw std::invalid_argument("config needs a sampler or a fixed point set");
  if (config.n_grid.empty()) throw std::invalid_argument("n grid must be nonempty");
  if (!std::is_sorted(config.n_grid.begin(), config.n_grid.end()))
    throw std::invalid_argument("n grid must be ascending");
  if (config.replicates < 1) throw std::invalid_argument("replicates must be >= 1");
  if (!config.seed)
    throw std::invalid_argument("no master seed: set it in the config or pass --seed");
  const std::uint64_t seed = *config.seed;
  if (!config.fixed_points.empty()) {
    for (long n : config.n_grid)
      if (n != static_cast<long>(config.fixed_points.size()))
        throw std::invalid_argument("with a fixed point set, every n must equal its size");
  }
  if (config.kappa > 0.0) {
    GeometrySpec geom{config.kappa, 0};
    ConvexDomainSpec domain;
    domain.radius = config.domain_radius.value_or(0.0);
    domain.epsilon = config.epsilon.value_or(0.0);
    const DomainValidation v = validate_domain(domain, geom);
    if (!v.ok)
      throw std::invalid_argument("invalid convex domain: " + v.violations.front());
  }

  ExperimentResult result;

  // Total variance: closed form when the sampler provides one, otherwise a
  // dedicated MC pass; bound comparisons use sigma2 + 3 stderr.
  Point b_star;
  if (config.sampler) {
    b_star = config.sampler->center();
    if (auto exact = config.sampler->total_variance()) {
      result.sigma2_hat = *exact;
      result.sigma2_hat_stderr = 0.0;
    } else {
      Rng rng = Rng::derive(seed, {0});
      VarianceEstimate est = estimate_total_variance(*config.space, *config.sampler, b_star,
                                                     config.sigma2_mc_draws, rng);
      result.sigma2_hat = est.sigma2;
      result.sigma2_hat_stderr = est.stderr_;
    }
  } else {
    // Fixed point set: the target is its empirical barycenter; variance is
    // the Frechet value there.
    const SolveMethod method =
        config.space->smooth() ? SolveMethod::gradient : SolveMethod::cyclic;
    b_star = empirical_barycenter(*config.space, config.fixed_points, method, config.solver)
                 .result;
    result.sigma2_hat = frechet_value(*config.space, config.fixed_points, b_star);
    result.sigma2_hat_stderr = 0.0;
  }
  result.sigma2_for_bounds = result.sigma2_hat + 3.0 * result.sigma2_hat_stderr;

  result.distance_errors.assign(config.n_grid.size(), {});
  std::vector<std::vector<char>> flags(config.n_grid.size());
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    result.distance_errors[ni].assign(static_cast<std::size_t>(config.replicates), 0.0);
    flags[ni].assign(static_cast<std::size_t>(config.replicates), 0);
  }

  struct Task {
    std::size_t ni;
    long rep;
  };
  std::vector<Task> tasks;
  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni)
    for (long rep = 0; rep < config.replicates; ++rep) tasks.push_back({ni, rep});

  const int workers = std::min<int>(worker_count(), static_cast<int>(tasks.size()));
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= tasks.size()) return;
      const Task& task = tasks[i];
      try {
        Rng rng = Rng::derive(seed,
                              {static_cast<std::uint64_t>(task.ni) + 1,
                               static_cast<std::uint64_t>(task.rep) + 1});
        ReplicateOutcome out =
            run_replicate(config, b_star, config.n_grid[task.ni], rng);
        result.distance_errors[task.ni][static_cast<std::size_t>(task.rep)] = out.distance;
        flags[task.ni][static_cast<std::size_t>(task.rep)] = out.flagged ? 1 : 0;
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
        return;
      }
    }
  };
  if (workers <= 1) {
    body();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);

  for (std::size_t ni = 0; ni < config.n_grid.size(); ++ni) {
    const long n = config.n_grid[ni];
    const auto& dists = result.distance_errors[ni];
    std::vector<double> sq(dists.size());
    for (std::size_t i = 0; i < dists.size(); ++i) sq[i] = dists[i] * dists[i];

    SummaryRow row;
    row.experiment_id = config.experiment_id;
    row.space = to_string(config.space->kind());
    row.kappa = config.kappa;
    row.epsilon = config.epsilon.value_or(0.0);
    row.estimator = estimator_name(config);
    row.n = n;
    row.replicates = config.replicates;
    const double r = static_cast<double>(config.replicates);
    row.mse = pairwise_sum(sq.data(), sq.size()) / r;
    double var_acc = 0.0;
    for (double s : sq) var_acc += (s - row.mse) * (s - row.mse);
    row.mse_stderr = config.replicates > 1 ? std::sqrt(var_acc / (r * (r - 1.0))) : 0.0;

    std::vector<double> sorted = sq;
    std::sort(sorted.begin(), sorted.end());
    row.q50 = quantile_sorted(sorted, 0.50);
    row.q90 = quantile_sorted(sorted, 0.90);
    row.q99 = quantile_sorted(sorted, 0.99);

    row.exp_bound = expectation_bound_for(config, n, result.sigma2_for_bounds);
    row.tail_bound = tail_bound_for(config, n, result.sigma2_for_bounds);
    row.delta = config.delta;
    long exceed = 0;
    for (double d : dists)
      if (d > row.tail_bound) ++exceed;
    row.exceedance = static_cast<double>(exceed) / r;
    long flag_count = 0;
    for (char f : flags[ni]) flag_count += f;
    row.flags = flag_count;
    row.seed = seed;
    result.rows.push_back(std::move(row));
  }
  return result;
}

double loglog_slope(const std::vector<SummaryRow>& rows) {
  if (rows.size() < 2) throw std::invalid_argument("slope needs at least two grid points");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(rows.size());
  for (const SummaryRow& row : rows) {
    const double x = std::log(static_cast<double>(row.n));
    const double y = std::log(row.mse);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Figure1Report figure1_regression(const std::vector<int>& p_grid, std::uint64_t seed) {
  if (p_grid.empty()) throw std::invalid_argument("p grid must be nonempty");
  Figure1Report report;
  const StepSchedule harmonic = StepSchedule::harmonic();
  for (std::size_t pi = 0; pi < p_grid.size(); ++pi) {
    const int p = p_grid[pi];
    auto [tree, points] = build_figure1_tree(p, {1.0, 1.0, 1.0});
    TreeSpace space(std::move(tree));
    const Point root = space.node_locus(0);

    Figure1Entry entry;
    entry.p = p;
    entry.adversarial_distance =
        space.distance(iterated_barycenter(space, points, harmonic).result, root);

    std::vector<double> perm_dists;
    Rng rng = Rng::derive(seed, {pi + 1});
    std::vector<Point> shuffled = points;
    for (int trial = 0; trial < 100; ++trial) {
      for (std::size_t i = shuffled.size(); i > 1; --i) {
        const std::size_t j = rng.uniform_int(i);
        std::swap(shuffled[i - 1], shuffled[j]);
      }
      perm_dists.push_back(
          space.distance(iterated_barycenter(space, shuffled, harmonic).result, root));
    }
    std::sort(perm_dists.begin(), perm_dists.end());
    entry.permutation_q50 = quantile_sorted(perm_dists, 0.50);
    entry.permutation_q90 = quantile_sorted(perm_dists, 0.90);
    entry.permutation_min = perm_dists.front();
    entry.permutation_max = perm_dists.back();
    report.entries.push_back(entry);
  }
  const double first = report.entries.front().adversarial_distance;
  const double last = report.entries.back().adversarial_distance;
  report.non_vanishing = last >= 0.9 * first;
  return report;
}

std::vector<CheckOutcome> evaluate_checks(const ExperimentConfig& config,
                                          const ExperimentResult& result) {
  std::vector<CheckOutcome> outcomes;
  if (config.check_expectation_bound) {
    CheckOutcome outcome;
    outcome.name = "expectation-bound";
    std::ostringstream detail;
    for (const SummaryRow& row : result.rows) {
      const bool ok = row.mse <= row.exp_bound + 3.0 * row.mse_stderr;
      if (!ok) outcome.pass = false;
      detail << "n=" << row.n << " mse=" << row.mse << (ok ? " <= " : " > ")
             << row.exp_bound << "+3se; ";
    }
    outcome.detail = detail.str();
    outcomes.push_back(std::move(outcome));
  }
  if (config.check_tail_coverage) {
    CheckOutcome outcome;
    outcome.name = "tail-coverage";
    std::ostringstream detail;
    for (std::size_t ni = 0; ni < result.rows.size(); ++ni) {
      const TailCoverageReport cover = check_tail_coverage(
          result.distance_errors[ni], result.rows[ni].tail_bound, config.delta);
      if (!cover.pass) outcome.pass = false;
      detail << "n=" << result.rows[ni].n << " exceedance=" << cover.exceedance
             << " threshold=" << cover.threshold << "; ";
    }
    outcome.detail = detail.str();
    outcomes.push_back(std::move(outcome));
  }
  if (config.slope_window) {
    CheckOutcome outcome;
    outcome.name = "rate-slope";
    const double slope = loglog_slope(result.rows);
    outcome.pass = slope >= (*config.slope_window)[0] && slope <= (*config.slope_window)[1];
    std::ostringstream detail;
    detail << "slope=" << slope << " window=[" << (*config.slope_window)[0] << ","
           << (*config.slope_window)[1] << "]";
    outcome.detail = detail.str();
    outcomes.push_back(std::move(outcome));
  }
  return outcomes;
}

}  // namespace frechet
