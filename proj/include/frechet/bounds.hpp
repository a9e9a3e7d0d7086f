#pragma once

#include <optional>
#include <span>
#include <string>

namespace frechet::bounds {

/// Strong-convexity modulus of the squared distance: 2 for kappa <= 0,
/// (pi - 2 sqrt(kappa) eps) tan(eps sqrt(kappa)) for kappa > 0 with
/// 0 < eps sqrt(kappa) < pi/2.
double alpha_constant(double kappa, double epsilon);

/// Lipschitz constant L of the empirical barycenter map (the map itself is
/// L/n-Lipschitz): 1 for kappa <= 0, 2 / (eps^{1/4} kappa^{1/8}) otherwise.
double lipschitz_constant(double kappa, double epsilon);

/// Expectation-bound constant: A = 2 for kappa <= 0 and
/// 32 / (eps^{1/4} kappa^{1/8} alpha) for kappa > 0; the heteroskedastic
/// variant multiplies the positive-curvature value by sqrt(2).
double expectation_constant(double kappa, double epsilon, bool heteroskedastic);

/// Inputs of the finite-sample bounds. sigma2 holds the total variance (or
/// the mean of per-sample variances), k2 the sub-Gaussian parameter (or its
/// mean), r the support radius. Each bound lists which fields it needs.
struct BoundQuery {
  long n = 1;
  double kappa = 0.0;
  std::optional<double> epsilon;  // required iff kappa > 0
  std::optional<double> sigma2;
  std::optional<double> k2;
  std::optional<double> r;
  std::optional<double> delta;
};

/// E[d(hat b_n, b*)^2] <= A sigma^2 / n.
double empirical_expectation_bound(const BoundQuery& q);

/// Iterated barycenter in expectation: sigma^2/n for kappa <= 0 (harmonic
/// steps); 32 sigma^2 / (alpha^2 (n+1)) for kappa > 0 with
/// t_k = 2/(alpha k + 2).
double iterated_expectation_bound(const BoundQuery& q);

/// A variable supported in a ball of radius C is 4C^2-sub-Gaussian.
double subgaussian_of_bounded(double c);

/// Independent K_i^2-sub-Gaussian variables tensorize to sum(K_i^2) on the
/// l1-product space.
double subgaussian_tensorize(std::span<const double> k2s);

/// An L-Lipschitz image of a K^2-sub-Gaussian variable is L^2 K^2-sub-Gaussian.
double subgaussian_compose(double k2, double lipschitz);

struct SubGammaParams {
  double sigma2 = 0.0;
  double c = 0.0;
};

/// A variable supported in a ball of radius R is (sigma_tilde^2, R)-sub-Gamma
/// with sigma_tilde^2 = (1/2) E d(X,X')^2.
SubGammaParams subgamma_of_bounded(double sigma_tilde2, double r);

/// Weakening usable when only the total variance is known: (2 sigma^2, R).
SubGammaParams subgamma_of_total_variance(double sigma2, double r);

/// One-sided deviation of any 1-Lipschitz image:
/// sigma sqrt(2 log(1/delta)) + c log(1/delta).
double subgamma_tail(const SubGammaParams& params, double delta);

enum class TailFlavor { subgaussian, hoeffding, bernstein };

TailFlavor tail_flavor_from_string(const std::string& name);

/// High-probability bounds on d(hat b_n, b*). The bias term is
/// sqrt(A~) sigma / sqrt(n) in every flavor (Jensen form); `strict_paper`
/// reproduces the printed constants, where the Hoeffding and Bernstein
/// statements carry A~ without the radical.
double empirical_tail_bound(const BoundQuery& q, TailFlavor flavor, bool strict_paper = false);

/// CAT(0) iterated barycenter with t = (1/2, ..., 1/n): bias term
/// sigma/sqrt(n) plus the flavor's deviation term. Rejects kappa > 0.
double iterated_tail_bound_cat0(const BoundQuery& q, TailFlavor flavor);

enum class RiemannianCase { unbounded, bounded };

/// Gradient-route bounds in the smooth setting. Unbounded needs k2;
/// bounded needs r (ball radius) and the alpha inputs.
double riemannian_tail_bound(const BoundQuery& q, RiemannianCase riem_case);

/// PAC resample budget from the diameter D:
/// ceil( (4 D^2 / eps^2) max(1, log(1/delta)) ).
long sample_size_hoeffding(double diameter, double eps, double delta);

/// PAC resample budget using the mean squared gap sigma_tilde^2:
/// ceil( (16/3) max(sigma_tilde^2/eps^2, D/eps) max(1, log(1/delta)) ).
long sample_size_bernstein(double sigma_tilde2, double diameter, double eps, double delta);

}  // namespace frechet::bounds
