#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "frechet/samplers.hpp"
#include "frechet/solvers.hpp"

namespace frechet {

/// Diameter D and mean squared gap sigma_tilde^2 = (1/(2 n^2)) sum_{i,j}
/// d(x_i,x_j)^2 of a point set (ordered pairs, i = j included).
struct PairwiseStats {
  double diameter = 0.0;
  double sigma_tilde2 = 0.0;
};

PairwiseStats pairwise_stats(const Space& space, const std::vector<Point>& points);

enum class BudgetKind { hoeffding, bernstein, auto_select };

BudgetKind budget_kind_from_string(const std::string& name);
std::string to_string(BudgetKind kind);

/// Resample budget backing a stochastic approximation run.
struct ApproxBudget {
  long m = 0;
  BudgetKind kind = BudgetKind::hoeffding;
  double eps = 0.0;
  double delta = 0.0;
  double diameter = 0.0;
  double sigma_tilde2 = 0.0;
  long m_hoeffding = 0;
  long m_bernstein = 0;
};

struct ApproxResult {
  Point point;
  ApproxBudget budget;
};

/// PAC approximation of the barycenter of a finite point set: draws m
/// indices uniformly with replacement (m from the requested budget rule,
/// `auto_select` takes the smaller) and returns the harmonic-schedule
/// iterated barycenter of the resampled list. Deterministic given the seed.
/// Budgets above 10^9 are rejected with the computed m reported.
ApproxResult stochastic_barycenter_approx(const Space& space, const std::vector<Point>& points,
                                          double eps, double delta, BudgetKind kind,
                                          std::uint64_t seed);

struct BatchPlan {
  long batches = 1;     // P
  long batch_size = 1;  // N
};

/// Batch-of-batches estimator: splits the n = P*N samples into consecutive
/// blocks, solves each batch barycenter, then the barycenter of the batch
/// results. Method defaults per space: cyclic on trees, gradient elsewhere.
Point parallel_barycenter(const Space& space, const std::vector<Point>& samples,
                          const BatchPlan& plan,
                          std::optional<SolveMethod> method = std::nullopt,
                          const SolverOptions& options = {});

/// Tail bound for the parallelized estimator:
/// A sigma / sqrt(n) + L^2 K sqrt(log(1/delta)/n).
double parallel_tail_bound(double kappa, double epsilon, double sigma2, double k2, long n,
                           double delta);

/// Sampler symmetrized about p: with probability 1/2 the base draw, else its
/// geodesic reflection through p. The wrapped law is symmetric around p and
/// hence has barycenter p.
std::shared_ptr<Sampler> symmetrize_sampler(std::shared_ptr<const Space> space, Point p,
                                            std::shared_ptr<const Sampler> base);

}  // namespace frechet
