#include "frechet/estimators.hpp"

#include <cmath>

#include "frechet/bounds.hpp"

namespace frechet {

PairwiseStats pairwise_stats(const Space& space, const std::vector<Point>& points) {
  if (points.empty()) throw std::invalid_argument("point list must be nonempty");
  const std::size_t n = points.size();
  PairwiseStats stats;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double d = space.distance(points[i], points[j]);
      stats.diameter = std::max(stats.diameter, d);
      sum_sq += 2.0 * d * d;  // both ordered pairs (i,j) and (j,i)
    }
  }
  stats.sigma_tilde2 = sum_sq / (2.0 * static_cast<double>(n) * static_cast<double>(n));
  return stats;
}

BudgetKind budget_kind_from_string(const std::string& name) {
  if (name == "hoeffding") return BudgetKind::hoeffding;
  if (name == "bernstein") return BudgetKind::bernstein;
  if (name == "auto") return BudgetKind::auto_select;
  throw std::invalid_argument("unknown budget kind: " + name);
}

std::string to_string(BudgetKind kind) {
  switch (kind) {
    case BudgetKind::hoeffding: return "hoeffding";
    case BudgetKind::bernstein: return "bernstein";
    case BudgetKind::auto_select: return "auto";
  }
  return "?";
}

ApproxResult stochastic_barycenter_approx(const Space& space, const std::vector<Point>& points,
                                          double eps, double delta, BudgetKind kind,
                                          std::uint64_t seed) {
  if (points.empty()) throw std::invalid_argument("point list must be nonempty");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");

  ApproxBudget budget;
  budget.eps = eps;
  budget.delta = delta;
  const PairwiseStats stats = pairwise_stats(space, points);
  budget.diameter = stats.diameter;
  budget.sigma_tilde2 = stats.sigma_tilde2;
  budget.m_hoeffding = bounds::sample_size_hoeffding(stats.diameter, eps, delta);
  budget.m_bernstein =
      bounds::sample_size_bernstein(stats.sigma_tilde2, stats.diameter, eps, delta);
  switch (kind) {
    case BudgetKind::hoeffding:
      budget.kind = kind;
      budget.m = budget.m_hoeffding;
      break;
    case BudgetKind::bernstein:
      budget.kind = kind;
      budget.m = budget.m_bernstein;
      break;
    case BudgetKind::auto_select:
      budget.kind = budget.m_bernstein <= budget.m_hoeffding ? BudgetKind::bernstein
                                                             : BudgetKind::hoeffding;
      budget.m = std::min(budget.m_bernstein, budget.m_hoeffding);
      break;
  }
  if (budget.m > 1000000000L)
    throw std::invalid_argument("resample budget m = " + std::to_string(budget.m) +
                                " exceeds the 1e9 guard");

  // Indices are drawn before any solving so budgets stay auditable.
  Rng rng(seed);
  std::vector<Point> resampled;
  resampled.reserve(static_cast<std::size_t>(budget.m));
  for (long i = 0; i < budget.m; ++i)
    resampled.push_back(points[rng.uniform_int(points.size())]);

  ApproxResult out{iterated_barycenter(space, resampled, StepSchedule::harmonic()).result,
                   budget};
  return out;
}

Point parallel_barycenter(const Space& space, const std::vector<Point>& samples,
                          const BatchPlan& plan, std::optional<SolveMethod> method,
                          const SolverOptions& options) {
  if (plan.batches < 1 || plan.batch_size < 1)
    throw std::invalid_argument("batch plan entries must be >= 1");
  if (static_cast<long>(samples.size()) != plan.batches * plan.batch_size)
    throw std::invalid_argument("sample count does not equal batches * batch_size");
  const SolveMethod m =
      method.value_or(space.smooth() ? SolveMethod::gradient : SolveMethod::cyclic);

  std::vector<Point> batch_results;
  batch_results.reserve(static_cast<std::size_t>(plan.batches));
  for (long b = 0; b < plan.batches; ++b) {
    const auto first = samples.begin() + b * plan.batch_size;
    std::vector<Point> batch(first, first + plan.batch_size);
    batch_results.push_back(empirical_barycenter(space, batch, m, options).result);
  }
  return empirical_barycenter(space, batch_results, m, options).result;
}

double parallel_tail_bound(double kappa, double epsilon, double sigma2, double k2, long n,
                           double delta) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (sigma2 < 0.0 || k2 < 0.0) throw std::invalid_argument("variance inputs must be nonnegative");
  if (!(delta > 0.0) || !(delta < 1.0)) throw std::invalid_argument("delta must lie in (0,1)");
  const double a = bounds::expectation_constant(kappa, epsilon, false);
  const double lip = bounds::lipschitz_constant(kappa, epsilon);
  const double nn = static_cast<double>(n);
  return a * std::sqrt(sigma2) / std::sqrt(nn) +
         lip * lip * std::sqrt(k2) * std::sqrt(std::log(1.0 / delta) / nn);
}

namespace {

class SymmetrizedSampler : public Sampler {
 public:
  SymmetrizedSampler(std::shared_ptr<const Space> space, Point p,
                     std::shared_ptr<const Sampler> base)
      : space_(std::move(space)), p_(std::move(p)), base_(std::move(base)) {
    if (!space_->smooth())
      throw std::invalid_argument("symmetrization needs a smooth space");
    space_->validate_point(p_);
  }

  Point sample(Rng& rng) const override {
    Point draw = base_->sample(rng);
    if (rng() & 1ULL) return draw;
    return space_->point_symmetry(p_, draw);
  }

  const Point& center() const override { return p_; }

  double support_radius() const override {
    const double base_r = base_->support_radius();
    if (!std::isfinite(base_r)) return kInfinity;
    // Support of the wrapped law sits within d(p, base center) + base radius.
    return space_->distance(p_, base_->center()) + base_r;
  }

  std::string describe() const override { return "symmetrized(" + base_->describe() + ")"; }

 private:
  std::shared_ptr<const Space> space_;
  Point p_;
  std::shared_ptr<const Sampler> base_;
};

}  // namespace

std::shared_ptr<Sampler> symmetrize_sampler(std::shared_ptr<const Space> space, Point p,
                                            std::shared_ptr<const Sampler> base) {
  return std::make_shared<SymmetrizedSampler>(std::move(space), std::move(p), std::move(base));
}

}  // namespace frechet
