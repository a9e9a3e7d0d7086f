// Command-line front end: barycenter solves, PAC stochastic approximation,
// bound evaluation and seeded Monte Carlo experiments over CSV/JSON files.

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>

#include "frechet/bounds.hpp"
#include "frechet/estimators.hpp"
#include "frechet/io.hpp"
#include "frechet/mclab.hpp"
#include "frechet/spaces.hpp"

namespace {

using namespace frechet;

constexpr int kExitOk = 0;
constexpr int kExitInputError = 1;
constexpr int kExitNotConverged = 2;

struct SpaceFlags {
  std::string space = "euclidean";
  double kappa = 0.0;
  int dim = 2;
  std::string tree_file;
};

void add_space_flags(CLI::App* cmd, SpaceFlags& flags) {
  cmd->add_option("--space", flags.space, "euclidean|sphere|hyperbolic|spd|tree")
      ->default_val("euclidean");
  cmd->add_option("--kappa", flags.kappa, "curvature (sphere/hyperbolic)");
  cmd->add_option("--dim", flags.dim, "dimension (coordinate spaces)");
  cmd->add_option("--tree", flags.tree_file, "edge-list CSV for --space tree");
}

std::shared_ptr<Space> build_space(const SpaceFlags& flags) {
  const SpaceKind kind = space_kind_from_string(flags.space);
  if (kind == SpaceKind::tree) {
    if (flags.tree_file.empty())
      throw IoError("--space tree needs --tree pointing at the edge-list CSV");
    return std::make_shared<TreeSpace>(read_tree_csv(flags.tree_file));
  }
  return make_space(kind, flags.kappa, flags.dim);
}

/// Positive-curvature admissibility gate for the solve/approx commands.
/// Returns the epsilon actually used (the flag value, or the largest
/// admissible one derived from the minimum enclosing ball).
std::optional<double> enforce_domain(const Space& space, const std::vector<Point>& points,
                                     std::optional<double> epsilon_flag) {
  const double kappa = space.curvature_bound();
  if (kappa <= 0.0) return epsilon_flag;
  const auto [center, radius] = min_enclosing_ball(space, points);
  const double diameter = model_diameter(kappa);
  double epsilon;
  if (epsilon_flag) {
    epsilon = *epsilon_flag;
  } else {
    epsilon = diameter / 2.0 - 2.0 * radius;
    if (!(epsilon > 0.0))
      throw IoError("no admissible epsilon: enclosing radius " + format_value(radius) +
                    " is not below D_kappa/4 = " + format_value(diameter / 4.0));
    std::cout << "derived epsilon " << format_value(epsilon) << " from enclosing radius "
              << format_value(radius) << "\n";
  }
  GeometrySpec geom{kappa, 0};
  ConvexDomainSpec domain;
  domain.radius = radius;
  domain.epsilon = epsilon;
  const DomainValidation report = validate_domain(domain, geom);
  if (!report.ok) throw IoError("domain validation failed: " + report.violations.front());
  return epsilon;
}

int cmd_solve(const SpaceFlags& space_flags, const std::string& points_file,
              const std::string& method_name, const std::string& schedule_name,
              std::optional<double> epsilon, double tol, long max_rounds,
              const std::string& out_file) {
  std::shared_ptr<Space> space = build_space(space_flags);
  const std::vector<Point> points = read_points_csv(*space, points_file);
  epsilon = enforce_domain(*space, points, epsilon);

  SolverOptions options;
  options.tol = tol;
  options.max_rounds = max_rounds;

  SolverReport report;
  if (method_name == "iterated") {
    StepSchedule schedule = StepSchedule::harmonic();
    if (schedule_name == "cat-kappa") {
      if (!(space->curvature_bound() > 0.0) || !epsilon)
        throw IoError("--schedule cat-kappa needs a positive-curvature space and --epsilon");
      schedule = StepSchedule::positive_curvature(
          bounds::alpha_constant(space->curvature_bound(), *epsilon));
    }
    report = iterated_barycenter(*space, points, schedule);
  } else {
    report = empirical_barycenter(*space, points, solve_method_from_string(method_name), options);
  }

  if (!out_file.empty()) write_points_csv(*space, {report.result}, out_file);
  std::cout << "method " << report.method << ": " << report.iterations
            << " iterations, final movement " << format_value(report.final_movement) << "\n";
  if (out_file.empty()) {
    for (Eigen::Index i = 0; i < report.result.data.size(); ++i)
      std::cout << (i ? "," : "") << format_value(report.result.data[i]);
    std::cout << "\n";
  }
  return report.converged ? kExitOk : kExitNotConverged;
}

int cmd_approx(const SpaceFlags& space_flags, const std::string& points_file, double eps,
               double delta, const std::string& bound_name, std::uint64_t seed,
               const std::string& out_file) {
  std::shared_ptr<Space> space = build_space(space_flags);
  const std::vector<Point> points = read_points_csv(*space, points_file);
  enforce_domain(*space, points, std::nullopt);

  const ApproxResult result = stochastic_barycenter_approx(
      *space, points, eps, delta, budget_kind_from_string(bound_name), seed);
  std::cout << "m " << result.budget.m << " (" << to_string(result.budget.kind)
            << "; hoeffding " << result.budget.m_hoeffding << ", bernstein "
            << result.budget.m_bernstein << ")\n";
  std::cout << "D " << format_value(result.budget.diameter) << "\n";
  std::cout << "sigma_tilde2 " << format_value(result.budget.sigma_tilde2) << "\n";
  if (!out_file.empty()) write_points_csv(*space, {result.point}, out_file);
  for (Eigen::Index i = 0; i < result.point.data.size(); ++i)
    std::cout << (i ? "," : "") << format_value(result.point.data[i]);
  std::cout << "\n";
  return kExitOk;
}

struct BoundFlags {
  std::string which;
  long n = 1;
  double kappa = 0.0;
  std::optional<double> epsilon, sigma2, k2, r, delta, big_d, eps, sigma_tilde2;
  std::string flavor = "subgaussian";
  std::string riem_case = "bounded";
  bool heteroskedastic = false;
  bool strict_paper = false;
};

double require_flag(const std::optional<double>& value, const char* flag) {
  if (!value) throw IoError(std::string("missing required flag ") + flag);
  return *value;
}

int cmd_bound(const BoundFlags& f) {
  bounds::BoundQuery q;
  q.n = f.n;
  q.kappa = f.kappa;
  q.epsilon = f.epsilon;
  q.sigma2 = f.sigma2;
  q.k2 = f.k2;
  q.r = f.r;
  q.delta = f.delta;

  double value = 0.0;
  if (f.which == "alpha") {
    value = bounds::alpha_constant(f.kappa, f.epsilon.value_or(0.0));
  } else if (f.which == "lipschitz") {
    value = bounds::lipschitz_constant(f.kappa, f.epsilon.value_or(0.0));
  } else if (f.which == "A") {
    value = bounds::expectation_constant(f.kappa, f.epsilon.value_or(0.0), f.heteroskedastic);
  } else if (f.which == "empirical-exp") {
    value = bounds::empirical_expectation_bound(q);
  } else if (f.which == "iterated-exp") {
    value = bounds::iterated_expectation_bound(q);
  } else if (f.which == "tail-subgaussian") {
    value = bounds::empirical_tail_bound(q, bounds::TailFlavor::subgaussian, f.strict_paper);
  } else if (f.which == "tail-hoeffding") {
    value = bounds::empirical_tail_bound(q, bounds::TailFlavor::hoeffding, f.strict_paper);
  } else if (f.which == "tail-bernstein") {
    value = bounds::empirical_tail_bound(q, bounds::TailFlavor::bernstein, f.strict_paper);
  } else if (f.which == "iterated-tail") {
    value = bounds::iterated_tail_bound_cat0(q, bounds::tail_flavor_from_string(f.flavor));
  } else if (f.which == "riemannian-tail") {
    value = bounds::riemannian_tail_bound(q, f.riem_case == "unbounded"
                                                 ? bounds::RiemannianCase::unbounded
                                                 : bounds::RiemannianCase::bounded);
  } else if (f.which == "m-hoeffding") {
    std::cout << bounds::sample_size_hoeffding(require_flag(f.big_d, "--D"),
                                               require_flag(f.eps, "--eps"),
                                               require_flag(f.delta, "--delta"))
              << "\n";
    return kExitOk;
  } else if (f.which == "m-bernstein") {
    std::cout << bounds::sample_size_bernstein(
                     require_flag(f.sigma_tilde2, "--sigma-tilde2"),
                     require_flag(f.big_d, "--D"), require_flag(f.eps, "--eps"),
                     require_flag(f.delta, "--delta"))
              << "\n";
    return kExitOk;
  } else {
    throw IoError("unknown --which value '" + f.which + "'");
  }
  std::cout << format_value(value) << "\n";
  return kExitOk;
}

int cmd_experiment(const std::string& config_file, std::optional<std::uint64_t> seed,
                   const std::string& out_file, const std::string& summary_file) {
  ExperimentConfig config = load_experiment_config(config_file);
  if (seed) config.seed = *seed;
  const ExperimentResult result = run_error_experiment(config);
  write_results_csv(result.rows, out_file);

  std::ostringstream summary;
  summary << config.experiment_id << ": sigma2_hat " << format_value(result.sigma2_hat)
          << " (+3se " << format_value(result.sigma2_for_bounds) << ")\n";
  const auto outcomes = evaluate_checks(config, result);
  bool all_pass = true;
  for (const CheckOutcome& outcome : outcomes) {
    all_pass = all_pass && outcome.pass;
    summary << (outcome.pass ? "[PASS] " : "[FAIL] ") << outcome.name << ": " << outcome.detail
            << "\n";
  }
  if (outcomes.empty()) summary << "no checks enabled\n";
  std::cout << summary.str();
  if (!summary_file.empty()) {
    std::ofstream out(summary_file);
    out << summary.str();
  }
  return all_pass ? kExitOk : kExitInputError;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"barycenter estimation in geodesic spaces"};
  app.require_subcommand(1);

  // solve ---------------------------------------------------------------
  SpaceFlags solve_space;
  std::string solve_points, solve_method = "cyclic", solve_schedule = "harmonic", solve_out;
  std::optional<double> solve_epsilon;
  double solve_tol = 1e-9;
  long solve_max_rounds = 10000;
  CLI::App* solve = app.add_subcommand("solve", "empirical or iterated barycenter of a point file");
  add_space_flags(solve, solve_space);
  solve->add_option("--points", solve_points, "point CSV")->required();
  solve->add_option("--method", solve_method, "exact|cyclic|gradient|iterated");
  solve->add_option("--schedule", solve_schedule, "harmonic|cat-kappa (iterated)");
  solve->add_option("--epsilon", solve_epsilon, "convex-domain margin (kappa > 0)");
  solve->add_option("--tol", solve_tol, "solver tolerance");
  solve->add_option("--max-rounds", solve_max_rounds, "pass/step cap");
  solve->add_option("--out", solve_out, "write the barycenter to this CSV");

  // approx --------------------------------------------------------------
  SpaceFlags approx_space;
  std::string approx_points, approx_bound = "auto", approx_out;
  double approx_eps = 0.0, approx_delta = 0.0;
  std::optional<std::uint64_t> approx_seed;
  CLI::App* approx =
      app.add_subcommand("approx", "PAC stochastic approximation of a point set's barycenter");
  add_space_flags(approx, approx_space);
  approx->add_option("--points", approx_points, "point CSV")->required();
  approx->add_option("--eps", approx_eps, "target accuracy")->required();
  approx->add_option("--delta", approx_delta, "failure probability")->required();
  approx->add_option("--bound", approx_bound, "hoeffding|bernstein|auto");
  approx->add_option("--seed", approx_seed, "resampling seed")->required();
  approx->add_option("--out", approx_out, "write the approximation to this CSV");

  // bound ---------------------------------------------------------------
  BoundFlags bound_flags;
  CLI::App* bound = app.add_subcommand("bound", "evaluate a closed-form constant or bound");
  bound->add_option("--which", bound_flags.which,
                    "alpha|lipschitz|A|empirical-exp|iterated-exp|tail-subgaussian|"
                    "tail-hoeffding|tail-bernstein|iterated-tail|riemannian-tail|"
                    "m-hoeffding|m-bernstein")
      ->required();
  bound->add_option("--n", bound_flags.n);
  bound->add_option("--kappa", bound_flags.kappa);
  bound->add_option("--epsilon", bound_flags.epsilon);
  bound->add_option("--sigma2", bound_flags.sigma2);
  bound->add_option("--k2", bound_flags.k2);
  bound->add_option("--R", bound_flags.r);
  bound->add_option("--delta", bound_flags.delta);
  bound->add_option("--D", bound_flags.big_d);
  bound->add_option("--eps", bound_flags.eps);
  bound->add_option("--sigma-tilde2", bound_flags.sigma_tilde2);
  bound->add_option("--flavor", bound_flags.flavor, "subgaussian|hoeffding|bernstein");
  bound->add_option("--case", bound_flags.riem_case, "unbounded|bounded");
  bound->add_flag("--heteroskedastic", bound_flags.heteroskedastic);
  bound->add_flag("--strict-paper", bound_flags.strict_paper,
                  "print the theorem constants exactly as stated");

  // experiment ----------------------------------------------------------
  std::string experiment_config, experiment_out = "results.csv", experiment_summary;
  std::optional<std::uint64_t> experiment_seed;
  CLI::App* experiment = app.add_subcommand("experiment", "run a Monte Carlo sweep from JSON");
  experiment->add_option("config", experiment_config, "experiment JSON")->required();
  experiment->add_option("--out", experiment_out, "results CSV path");
  experiment->add_option("--seed", experiment_seed, "master seed (overrides the config)");
  experiment->add_option("--summary", experiment_summary, "write the check summary here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed())
      return cmd_solve(solve_space, solve_points, solve_method, solve_schedule, solve_epsilon,
                       solve_tol, solve_max_rounds, solve_out);
    if (approx->parsed())
      return cmd_approx(approx_space, approx_points, approx_eps, approx_delta, approx_bound,
                        *approx_seed, approx_out);
    if (bound->parsed()) return cmd_bound(bound_flags);
    if (experiment->parsed())
      return cmd_experiment(experiment_config, experiment_seed, experiment_out,
                            experiment_summary);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInputError;
  }
  return kExitInputError;
}
