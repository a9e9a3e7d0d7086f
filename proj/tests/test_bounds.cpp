#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "frechet/bounds.hpp"
#include "frechet/rng.hpp"

using namespace frechet::bounds;
using frechet::Rng;

namespace {

BoundQuery query(long n, double kappa, double eps, double sigma2, double k2, double r,
                 double delta) {
  BoundQuery q;
  q.n = n;
  q.kappa = kappa;
  if (kappa > 0.0) q.epsilon = eps;
  q.sigma2 = sigma2;
  if (k2 >= 0.0) q.k2 = k2;
  if (r >= 0.0) q.r = r;
  q.delta = delta;
  return q;
}

constexpr double kNearOne = 1.0 - 1e-12;

}  // namespace

TEST_CASE("alpha constant") {
  CHECK(alpha_constant(-3.0, 0.123) == 2.0);
  CHECK(alpha_constant(0.0, 1.0) == 2.0);
  CHECK(alpha_constant(1.0, M_PI / 4.0) == doctest::Approx(M_PI / 2.0).epsilon(1e-14));

  const double small = alpha_constant(1.0, 0.1);
  CHECK(small >= 4.0 / M_PI * 0.1);
  CHECK(small <= M_PI * 0.1);

  CHECK_THROWS_AS(alpha_constant(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(alpha_constant(1.0, M_PI), std::invalid_argument);
  CHECK_THROWS_AS(alpha_constant(4.0, M_PI / 2.0), std::invalid_argument);
}

TEST_CASE("alpha sandwich on a 1000-point grid") {
  Rng rng(1000);
  for (int i = 0; i < 1000; ++i) {
    const double kappa = 0.05 + 10.0 * rng.uniform();
    const double u = (1e-4 + (1.0 - 2e-4) * rng.uniform()) * M_PI / 2.0;
    const double eps = u / std::sqrt(kappa);
    const double a = alpha_constant(kappa, eps);
    CHECK(a >= 4.0 / M_PI * u * (1.0 - 1e-12));
    CHECK(a <= M_PI * u * (1.0 + 1e-12));
    CHECK(a > 0.0);
    CHECK(a <= 2.0);
  }
}

TEST_CASE("alpha limits") {
  // eps sqrt(kappa) -> pi/2 gives alpha -> 2.
  CHECK(std::abs(alpha_constant(1.0, M_PI / 2.0 - 1e-7) - 2.0) < 1e-6);
  // eps -> 0 gives alpha -> 0.
  CHECK(alpha_constant(1.0, 1e-6) < 1e-5);
}

TEST_CASE("alpha is decreasing in eps sqrt(kappa)") {
  double prev = 2.0 + 1e-9;
  for (double u = 0.01; u < M_PI / 2.0 - 0.01; u += 0.01) {
    const double a = alpha_constant(1.0, u);
    CHECK(a < prev);
    prev = a;
  }
}

TEST_CASE("lipschitz constant") {
  CHECK(lipschitz_constant(0.0, 0.5) == 1.0);
  CHECK(lipschitz_constant(-1.0, 0.5) == 1.0);
  CHECK(lipschitz_constant(1.0, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(lipschitz_constant(1.0, 0.0001) == doctest::Approx(20.0).epsilon(1e-12));
}

TEST_CASE("expectation constant") {
  CHECK(expectation_constant(0.0, 0.0, false) == 2.0);
  CHECK(expectation_constant(-2.0, 0.0, true) == 2.0);
  const double a = expectation_constant(1.0, M_PI / 4.0, false);
  CHECK(a == doctest::Approx(32.0 / (std::pow(M_PI / 4.0, 0.25) * (M_PI / 2.0))).epsilon(1e-13));
  CHECK(expectation_constant(1.0, M_PI / 4.0, true) ==
        doctest::Approx(std::sqrt(2.0) * a).epsilon(1e-13));
}

TEST_CASE("expectation bounds") {
  CHECK(empirical_expectation_bound(query(5, 0.0, 0, 0.0, -1, -1, 0.5)) == 0.0);
  CHECK(empirical_expectation_bound(query(100, 0.0, 0, 5.0, -1, -1, 0.5)) ==
        doctest::Approx(0.1).epsilon(1e-14));
  const double a = expectation_constant(1.0, M_PI / 4.0, false);
  CHECK(empirical_expectation_bound(query(10, 1.0, M_PI / 4.0, 1.0, -1, -1, 0.5)) ==
        doctest::Approx(a / 10.0).epsilon(1e-13));

  CHECK(iterated_expectation_bound(query(4, 0.0, 0, 1.0, -1, -1, 0.5)) ==
        doctest::Approx(0.25).epsilon(1e-15));
  const double alpha = M_PI / 2.0;
  CHECK(iterated_expectation_bound(query(7, 1.0, M_PI / 4.0, 1.0, -1, -1, 0.5)) ==
        doctest::Approx(32.0 / (alpha * alpha * 8.0)).epsilon(1e-13));
  CHECK(iterated_expectation_bound(query(9, 1.0, M_PI / 4.0, 0.0, -1, -1, 0.5)) == 0.0);
}

TEST_CASE("sub-Gaussian calculus") {
  CHECK(subgaussian_of_bounded(0.0) == 0.0);
  CHECK(subgaussian_of_bounded(1.0) == 4.0);
  CHECK(subgaussian_of_bounded(3.0) == 36.0);

  const std::vector<double> one{1.0};
  const std::vector<double> three{1.0, 2.0, 3.0};
  CHECK(subgaussian_tensorize(one) == 1.0);
  CHECK(subgaussian_tensorize(three) == 6.0);
  CHECK_THROWS_AS(subgaussian_tensorize(std::vector<double>{}), std::invalid_argument);

  CHECK(subgaussian_compose(7.0, 1.0) == 7.0);
  CHECK(subgaussian_compose(4.0, 0.5) == 1.0);
  CHECK(subgaussian_compose(2.0, 3.0) == 18.0);
}

TEST_CASE("tensorization and composition commute") {
  Rng rng(17);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> ks;
    for (int i = 0; i < 5; ++i) ks.push_back(rng.uniform() * 4.0);
    const double lip = rng.uniform() * 3.0;
    std::vector<double> composed;
    for (double k2 : ks) composed.push_back(subgaussian_compose(k2, lip));
    CHECK(subgaussian_compose(subgaussian_tensorize(ks), lip) ==
          doctest::Approx(subgaussian_tensorize(composed)).epsilon(1e-12));
  }
}

TEST_CASE("sub-Gamma parameters and tail") {
  const SubGammaParams p1 = subgamma_of_bounded(0.0, 1.0);
  CHECK(p1.sigma2 == 0.0);
  CHECK(p1.c == 1.0);
  const SubGammaParams p2 = subgamma_of_bounded(2.0, 0.5);
  CHECK(p2.sigma2 == 2.0);
  CHECK(p2.c == 0.5);

  // Weakening from the total variance: (2 sigma^2, R).
  const SubGammaParams weak = subgamma_of_total_variance(3.0, 1.5);
  CHECK(weak.sigma2 == 6.0);
  CHECK(weak.c == 1.5);

  CHECK(subgamma_tail({1.0, 1.0}, kNearOne) <= 1e-5);
  CHECK(subgamma_tail({1.0, 0.0}, std::exp(-2.0)) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(subgamma_tail({0.0, 1.0}, std::exp(-1.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("empirical tail bound") {
  SUBCASE("delta near one keeps only the bias term") {
    const double b = empirical_tail_bound(query(25, 0.0, 0, 4.0, 1.0, 1.0, kNearOne),
                                          TailFlavor::subgaussian);
    CHECK(b == doctest::Approx(std::sqrt(2.0) * 2.0 / 5.0).epsilon(1e-5));
  }
  SUBCASE("flat-space subgaussian value") {
    const double b = empirical_tail_bound(query(100, 0.0, 0, 1.0, 4.0, -1, std::exp(-1.0)),
                                          TailFlavor::subgaussian);
    CHECK(b == doctest::Approx(std::sqrt(2.0) / 10.0 + 2.0 / 10.0).epsilon(1e-13));
  }
  SUBCASE("hoeffding falls back to k2 = 4R^2 for the subgaussian flavor") {
    const double direct = empirical_tail_bound(query(50, 0.0, 0, 1.0, 4.0, 1.0, 0.1),
                                               TailFlavor::subgaussian);
    const double fallback = empirical_tail_bound(query(50, 0.0, 0, 1.0, -1, 1.0, 0.1),
                                                 TailFlavor::subgaussian);
    CHECK(direct == doctest::Approx(fallback).epsilon(1e-15));
  }
  SUBCASE("bernstein improves hoeffding in the small-variance regime") {
    Rng rng(23);
    for (int i = 0; i < 100; ++i) {
      const long n = 1 + static_cast<long>(rng.uniform_int(1000));
      const double r = 0.1 + 5.0 * rng.uniform();
      const double sigma = 0.5 * r * rng.uniform();  // sigma <= R/2
      const double delta = std::exp(-rng.uniform() * static_cast<double>(n));
      if (!(delta > 0.0) || !(delta < 1.0)) continue;
      const BoundQuery q = query(n, 0.0, 0, sigma * sigma, -1, r, delta);
      CHECK(empirical_tail_bound(q, TailFlavor::bernstein) <=
            empirical_tail_bound(q, TailFlavor::hoeffding) * (1.0 + 1e-12));
    }
  }
  SUBCASE("strict-paper mode prints A~ without the radical") {
    const BoundQuery q = query(100, 1.0, M_PI / 4.0, 1.0, -1, 0.2, 0.1);
    const double a_tilde = expectation_constant(1.0, M_PI / 4.0, true);
    const double jensen = empirical_tail_bound(q, TailFlavor::hoeffding, false);
    const double printed = empirical_tail_bound(q, TailFlavor::hoeffding, true);
    CHECK(printed - jensen ==
          doctest::Approx((a_tilde - std::sqrt(a_tilde)) / 10.0).epsilon(1e-12));
    // The subgaussian flavor matches the paper as printed.
    const BoundQuery qs = query(100, 1.0, M_PI / 4.0, 1.0, 1.0, -1, 0.1);
    CHECK(empirical_tail_bound(qs, TailFlavor::subgaussian, true) ==
          empirical_tail_bound(qs, TailFlavor::subgaussian, false));
  }
  SUBCASE("missing fields are named") {
    CHECK_THROWS_WITH_AS(
        empirical_tail_bound(query(10, 0.0, 0, 1.0, -1, -1, 0.1), TailFlavor::hoeffding),
        "missing bound input: r", std::invalid_argument);
  }
}

TEST_CASE("iterated CAT(0) tail bounds") {
  CHECK(iterated_tail_bound_cat0(query(16, 0.0, 0, 4.0, 1.0, -1, kNearOne),
                                 TailFlavor::subgaussian) ==
        doctest::Approx(0.5).epsilon(1e-5));
  CHECK(iterated_tail_bound_cat0(query(4, 0.0, 0, 0.0, -1, 1.0, std::exp(-1.0)),
                                 TailFlavor::hoeffding) == doctest::Approx(1.0).epsilon(1e-13));

  SUBCASE("bernstein below hoeffding for sigma <= R/2, log(1/delta) <= n") {
    Rng rng(37);
    for (int i = 0; i < 100; ++i) {
      const long n = 1 + static_cast<long>(rng.uniform_int(500));
      const double r = 0.1 + 2.0 * rng.uniform();
      const double sigma = 0.5 * r * rng.uniform();
      const double delta = std::exp(-rng.uniform() * static_cast<double>(n));
      if (!(delta > 0.0) || !(delta < 1.0)) continue;
      const BoundQuery q = query(n, 0.0, 0, sigma * sigma, -1, r, delta);
      CHECK(iterated_tail_bound_cat0(q, TailFlavor::bernstein) <=
            iterated_tail_bound_cat0(q, TailFlavor::hoeffding) * (1.0 + 1e-12));
    }
  }
  SUBCASE("positive curvature is rejected") {
    CHECK_THROWS_AS(iterated_tail_bound_cat0(query(10, 1.0, 0.5, 1.0, -1, 1.0, 0.1),
                                             TailFlavor::hoeffding),
                    std::invalid_argument);
  }
}

TEST_CASE("riemannian tail bounds") {
  CHECK(riemannian_tail_bound(query(25, 0.0, 0, 4.0, 9.0, -1, kNearOne),
                              RiemannianCase::unbounded) ==
        doctest::Approx(3.0 * 2.0 / 5.0).epsilon(1e-5));
  CHECK(riemannian_tail_bound(query(4, 0.0, 0, 1.0, -1, 1.0, std::exp(-1.0)),
                              RiemannianCase::bounded) ==
        doctest::Approx(0.25 + 0.5).epsilon(1e-13));
  CHECK(riemannian_tail_bound(query(9, 0.0, 0, 0.0, 4.0, -1, kNearOne),
                              RiemannianCase::unbounded) <= 1e-5);
}

TEST_CASE("PAC sample sizes") {
  CHECK(sample_size_hoeffding(1.0, 0.1, std::exp(-1.0)) == 400);
  CHECK(sample_size_hoeffding(1.0, 0.1, 0.5) == 400);  // log 2 < 1 clamps to 1
  CHECK(sample_size_hoeffding(1.0, 0.1, std::exp(-4.0)) == 1600);

  CHECK(sample_size_bernstein(0.01, 1.0, 0.1, std::exp(-1.0)) == 54);
  CHECK(sample_size_bernstein(1.0, 1.0, 0.1, std::exp(-1.0)) == 534);

  SUBCASE("bernstein budget undercuts hoeffding when sigma_tilde^2 << D^2") {
    Rng rng(41);
    for (int i = 0; i < 100; ++i) {
      const double d = 0.5 + 4.0 * rng.uniform();
      const double sigma_tilde2 = 0.5 * d * d * rng.uniform();
      const double eps = 0.5 * d * rng.uniform() + 1e-3;
      const double delta = 0.01 + 0.5 * rng.uniform();
      CHECK(sample_size_bernstein(sigma_tilde2, d, eps, delta) <=
            sample_size_hoeffding(d, eps, delta));
    }
  }
  SUBCASE("hoeffding budget is self-consistent with the corollary proof chain") {
    // The proof bounds d(b~_m, b_n) by (D/sqrt(m)) (1 + sqrt(log(1/delta))).
    Rng rng(43);
    for (int i = 0; i < 100; ++i) {
      const double d = 0.1 + 5.0 * rng.uniform();
      const double eps = 0.01 + rng.uniform();
      const double delta = 0.001 + 0.998 * rng.uniform();
      const long m = sample_size_hoeffding(d, eps, delta);
      const double achieved =
          d / std::sqrt(static_cast<double>(m)) * (1.0 + std::sqrt(std::log(1.0 / delta)));
      CHECK(achieved <= eps * (1.0 + 1e-9));
    }
  }
}

TEST_CASE("bound evaluators are monotone") {
  Rng rng(53);
  for (int i = 0; i < 50; ++i) {
    const double sigma2 = 0.1 + rng.uniform();
    const double r = 0.5 + rng.uniform();
    const double delta = 0.05 + 0.4 * rng.uniform();
    const long n = 2 + static_cast<long>(rng.uniform_int(500));

    // Decreasing in n.
    for (auto flavor : {TailFlavor::subgaussian, TailFlavor::hoeffding, TailFlavor::bernstein}) {
      CHECK(empirical_tail_bound(query(2 * n, 0.0, 0, sigma2, -1, r, delta), flavor) <
            empirical_tail_bound(query(n, 0.0, 0, sigma2, -1, r, delta), flavor));
    }
    CHECK(empirical_expectation_bound(query(2 * n, 0.0, 0, sigma2, -1, -1, delta)) <
          empirical_expectation_bound(query(n, 0.0, 0, sigma2, -1, -1, delta)));
    CHECK(iterated_expectation_bound(query(2 * n, 0.0, 0, sigma2, -1, -1, delta)) <
          iterated_expectation_bound(query(n, 0.0, 0, sigma2, -1, -1, delta)));

    // Increasing in sigma2, R and log(1/delta).
    CHECK(empirical_tail_bound(query(n, 0.0, 0, 2.0 * sigma2, -1, r, delta),
                               TailFlavor::bernstein) >
          empirical_tail_bound(query(n, 0.0, 0, sigma2, -1, r, delta), TailFlavor::bernstein));
    CHECK(empirical_tail_bound(query(n, 0.0, 0, sigma2, -1, 2.0 * r, delta),
                               TailFlavor::hoeffding) >
          empirical_tail_bound(query(n, 0.0, 0, sigma2, -1, r, delta), TailFlavor::hoeffding));
    CHECK(empirical_tail_bound(query(n, 0.0, 0, sigma2, -1, r, delta / 2.0),
                               TailFlavor::hoeffding) >
          empirical_tail_bound(query(n, 0.0, 0, sigma2, -1, r, delta), TailFlavor::hoeffding));
    CHECK(empirical_tail_bound(query(n, 0.0, 0, sigma2, 2.0, -1, delta),
                               TailFlavor::subgaussian) >
          empirical_tail_bound(query(n, 0.0, 0, sigma2, 1.0, -1, delta),
                               TailFlavor::subgaussian));
  }
}
