#include "frechet/bounds.hpp"

#include <cmath>
#include <stdexcept>

namespace frechet::bounds {

namespace {

void check_epsilon(double kappa, double epsilon) {
  if (kappa <= 0.0) return;
  const double x = epsilon * std::sqrt(kappa);
  if (!(x > 0.0) || !(x < M_PI / 2.0))
    throw std::invalid_argument("epsilon must satisfy 0 < epsilon sqrt(kappa) < pi/2");
}

double require(const std::optional<double>& field, const char* name) {
  if (!field) throw std::invalid_argument(std::string("missing bound input: ") + name);
  return *field;
}

double require_nonneg(const std::optional<double>& field, const char* name) {
  const double v = require(field, name);
  if (v < 0.0) throw std::invalid_argument(std::string(name) + " must be nonnegative");
  return v;
}

double log_inv(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0))
    throw std::invalid_argument("delta must lie in (0,1)");
  return std::log(1.0 / delta);
}

void check_n(long n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
}

double epsilon_of(const BoundQuery& q) {
  if (q.kappa <= 0.0) return 0.0;
  return require(q.epsilon, "epsilon");
}

/// K bar: explicit k2 if given, else 4R^2 for variables bounded in a ball
/// of radius R.
double k2_or_bounded(const BoundQuery& q) {
  if (q.k2) return require_nonneg(q.k2, "k2");
  return subgaussian_of_bounded(require_nonneg(q.r, "r (for k2 = 4R^2)"));
}

}  // namespace

double alpha_constant(double kappa, double epsilon) {
  if (kappa <= 0.0) return 2.0;
  check_epsilon(kappa, epsilon);
  const double root = std::sqrt(kappa);
  return (M_PI - 2.0 * root * epsilon) * std::tan(epsilon * root);
}

double lipschitz_constant(double kappa, double epsilon) {
  if (kappa <= 0.0) return 1.0;
  check_epsilon(kappa, epsilon);
  return 2.0 / (std::pow(epsilon, 0.25) * std::pow(kappa, 0.125));
}

double expectation_constant(double kappa, double epsilon, bool heteroskedastic) {
  if (kappa <= 0.0) return 2.0;
  check_epsilon(kappa, epsilon);
  const double base = 32.0 / (std::pow(epsilon, 0.25) * std::pow(kappa, 0.125) *
                              alpha_constant(kappa, epsilon));
  return heteroskedastic ? std::sqrt(2.0) * base : base;
}

double empirical_expectation_bound(const BoundQuery& q) {
  check_n(q.n);
  const double sigma2 = require_nonneg(q.sigma2, "sigma2");
  const double a = expectation_constant(q.kappa, epsilon_of(q), false);
  return a * sigma2 / static_cast<double>(q.n);
}

double iterated_expectation_bound(const BoundQuery& q) {
  check_n(q.n);
  const double sigma2 = require_nonneg(q.sigma2, "sigma2");
  if (q.kappa <= 0.0) return sigma2 / static_cast<double>(q.n);
  const double alpha = alpha_constant(q.kappa, epsilon_of(q));
  return 32.0 * sigma2 / (alpha * alpha * static_cast<double>(q.n + 1));
}

double subgaussian_of_bounded(double c) {
  if (c < 0.0) throw std::invalid_argument("ball radius must be nonnegative");
  return 4.0 * c * c;
}

double subgaussian_tensorize(std::span<const double> k2s) {
  if (k2s.empty()) throw std::invalid_argument("tensorization needs at least one parameter");
  double sum = 0.0;
  for (double k2 : k2s) {
    if (k2 < 0.0) throw std::invalid_argument("sub-Gaussian parameters must be nonnegative");
    sum += k2;
  }
  return sum;
}

double subgaussian_compose(double k2, double lipschitz) {
  if (k2 < 0.0) throw std::invalid_argument("sub-Gaussian parameter must be nonnegative");
  if (lipschitz < 0.0) throw std::invalid_argument("Lipschitz constant must be nonnegative");
  return lipschitz * lipschitz * k2;
}

SubGammaParams subgamma_of_bounded(double sigma_tilde2, double r) {
  if (sigma_tilde2 < 0.0) throw std::invalid_argument("sigma_tilde2 must be nonnegative");
  if (!(r > 0.0)) throw std::invalid_argument("support radius must be positive");
  return {sigma_tilde2, r};
}

SubGammaParams subgamma_of_total_variance(double sigma2, double r) {
  if (sigma2 < 0.0) throw std::invalid_argument("sigma2 must be nonnegative");
  return subgamma_of_bounded(2.0 * sigma2, r);
}

double subgamma_tail(const SubGammaParams& params, double delta) {
  const double l = log_inv(delta);
  return std::sqrt(params.sigma2) * std::sqrt(2.0 * l) + params.c * l;
}

TailFlavor tail_flavor_from_string(const std::string& name) {
  if (name == "subgaussian") return TailFlavor::subgaussian;
  if (name == "hoeffding") return TailFlavor::hoeffding;
  if (name == "bernstein") return TailFlavor::bernstein;
  throw std::invalid_argument("unknown tail flavor: " + name);
}

double empirical_tail_bound(const BoundQuery& q, TailFlavor flavor, bool strict_paper) {
  check_n(q.n);
  const double n = static_cast<double>(q.n);
  const double sigma = std::sqrt(require_nonneg(q.sigma2, "sigma2"));
  const double eps = epsilon_of(q);
  const double a_tilde = expectation_constant(q.kappa, eps, true);
  const double lip = lipschitz_constant(q.kappa, eps);
  const double l = log_inv(require(q.delta, "delta"));
  const double dev = std::sqrt(l / n);

  // The main theorem states the bias term as sqrt(A~) sigma / sqrt(n); the
  // printed Hoeffding/Bernstein variants carry A~ without the radical.
  double bias = std::sqrt(a_tilde) * sigma / std::sqrt(n);
  if (strict_paper && flavor != TailFlavor::subgaussian)
    bias = a_tilde * sigma / std::sqrt(n);

  switch (flavor) {
    case TailFlavor::subgaussian:
      return bias + lip * std::sqrt(k2_or_bounded(q)) * dev;
    case TailFlavor::hoeffding:
      return bias + 2.0 * lip * require_nonneg(q.r, "r") * dev;
    case TailFlavor::bernstein:
      return bias + 2.0 * lip * sigma * dev + lip * require_nonneg(q.r, "r") * l / n;
  }
  throw std::invalid_argument("unknown tail flavor");
}

double iterated_tail_bound_cat0(const BoundQuery& q, TailFlavor flavor) {
  check_n(q.n);
  if (q.kappa > 0.0)
    throw std::invalid_argument(
        "iterated tail bounds are only available for kappa <= 0");
  const double n = static_cast<double>(q.n);
  const double sigma = std::sqrt(require_nonneg(q.sigma2, "sigma2"));
  const double l = log_inv(require(q.delta, "delta"));
  const double dev = std::sqrt(l / n);
  const double bias = sigma / std::sqrt(n);

  switch (flavor) {
    case TailFlavor::subgaussian:
      return bias + std::sqrt(k2_or_bounded(q)) * dev;
    case TailFlavor::hoeffding:
      return bias + 2.0 * require_nonneg(q.r, "r") * dev;
    case TailFlavor::bernstein:
      return bias + 2.0 * sigma * dev + require_nonneg(q.r, "r") * l / n;
  }
  throw std::invalid_argument("unknown tail flavor");
}

double riemannian_tail_bound(const BoundQuery& q, RiemannianCase riem_case) {
  check_n(q.n);
  const double n = static_cast<double>(q.n);
  const double sigma = std::sqrt(require_nonneg(q.sigma2, "sigma2"));
  const double l = log_inv(require(q.delta, "delta"));
  const double dev = std::sqrt(l / n);

  if (riem_case == RiemannianCase::unbounded) {
    const double k = std::sqrt(require_nonneg(q.k2, "k2"));
    return k * sigma / std::sqrt(n) + k * dev;
  }
  const double r = require_nonneg(q.r, "r");
  const double alpha = alpha_constant(q.kappa, epsilon_of(q));
  return sigma / (alpha * std::sqrt(n)) + (2.0 * r / alpha) * dev;
}

namespace {

long ceil_to_count(double value) {
  if (!(value >= 0.0)) throw std::invalid_argument("sample size is not finite");
  const double c = std::ceil(value);
  if (c > 9.0e18) throw std::invalid_argument("sample size overflows");
  return std::max(1L, static_cast<long>(c));
}

}  // namespace

long sample_size_hoeffding(double diameter, double eps, double delta) {
  if (diameter < 0.0) throw std::invalid_argument("diameter must be nonnegative");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double l = std::max(1.0, log_inv(delta));
  return ceil_to_count(4.0 * diameter * diameter / (eps * eps) * l);
}

long sample_size_bernstein(double sigma_tilde2, double diameter, double eps, double delta) {
  if (sigma_tilde2 < 0.0) throw std::invalid_argument("sigma_tilde2 must be nonnegative");
  if (diameter < 0.0) throw std::invalid_argument("diameter must be nonnegative");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  const double l = std::max(1.0, log_inv(delta));
  const double lead = std::max(sigma_tilde2 / (eps * eps), diameter / eps);
  return ceil_to_count(16.0 / 3.0 * lead * l);
}

}  // namespace frechet::bounds
