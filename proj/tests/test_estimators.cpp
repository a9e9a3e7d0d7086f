#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "frechet/estimators.hpp"
#include "test_helpers.hpp"

using namespace frechet;
using frechet::testing::cap_point;
using frechet::testing::euclidean_point;

TEST_CASE("pairwise stats") {
  EuclideanSpace line(1);
  Vector z(1), two(1);
  z << 0.0;
  two << 2.0;

  SUBCASE("single point") {
    const PairwiseStats s = pairwise_stats(line, {line.point(z)});
    CHECK(s.diameter == 0.0);
    CHECK(s.sigma_tilde2 == 0.0);
  }
  SUBCASE("two points on a line") {
    const PairwiseStats s = pairwise_stats(line, {line.point(z), line.point(two)});
    CHECK(s.diameter == 2.0);
    CHECK(s.sigma_tilde2 == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("matches the brute-force double loop on random sphere points") {
    SphereSpace sphere(1.0, 2);
    Rng rng(606);
    std::vector<Point> pts;
    for (int i = 0; i < 20; ++i) pts.push_back(cap_point(sphere, sphere.north_pole(), 0.8, rng));
    const PairwiseStats s = pairwise_stats(sphere, pts);
    double max_d = 0.0, acc = 0.0;
    for (const Point& a : pts)
      for (const Point& b : pts) {
        const double d = sphere.distance(a, b);
        max_d = std::max(max_d, d);
        acc += d * d;
      }
    CHECK(s.diameter == doctest::Approx(max_d).epsilon(1e-14));
    CHECK(s.sigma_tilde2 == doctest::Approx(acc / (2.0 * 400.0)).epsilon(1e-12));
  }
}

TEST_CASE("stochastic barycenter approximation") {
  SUBCASE("single point set returns that point with the formula budget") {
    EuclideanSpace line(1);
    Vector v(1);
    v << 3.0;
    const ApproxResult r = stochastic_barycenter_approx(line, {line.point(v)}, 0.5, 0.1,
                                                        BudgetKind::hoeffding, 7);
    CHECK(r.point.data[0] == 3.0);
    CHECK(r.budget.m == 1);  // D = 0 clamps the budget to one draw
  }
  SUBCASE("identical points collapse immediately") {
    EuclideanSpace plane(2);
    Rng rng(4);
    const Point p = euclidean_point(2, rng);
    const ApproxResult r = stochastic_barycenter_approx(plane, {p, p, p}, 0.1, 0.1,
                                                        BudgetKind::bernstein, 99);
    CHECK(plane.distance(r.point, p) == 0.0);
  }
  SUBCASE("figure-1 budgets and determinism") {
    auto [tree, points] = build_figure1_tree(10, {1.0, 1.0, 1.0});
    auto space = std::make_shared<TreeSpace>(std::move(tree));
    const ApproxResult a =
        stochastic_barycenter_approx(*space, points, 0.2, 0.1, BudgetKind::hoeffding, 2024);
    const ApproxResult b =
        stochastic_barycenter_approx(*space, points, 0.2, 0.1, BudgetKind::hoeffding, 2024);
    CHECK(a.point.data == b.point.data);  // bit-identical across runs

    CHECK(a.budget.diameter == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(a.budget.sigma_tilde2 == doctest::Approx(4.0 / 3.0).epsilon(1e-14));
    CHECK(a.budget.m_hoeffding == 922);   // ceil(400 log 10)
    CHECK(a.budget.m_bernstein == 410);   // ceil((1600/9) log 10)
    CHECK(a.budget.m_bernstein < a.budget.m_hoeffding);

    const ApproxResult c =
        stochastic_barycenter_approx(*space, points, 0.2, 0.1, BudgetKind::auto_select, 2024);
    CHECK(c.budget.kind == BudgetKind::bernstein);
    CHECK(c.budget.m == 410);
  }
  SUBCASE("budget overflow guard reports the computed m") {
    EuclideanSpace line(1);
    Vector a(1), b(1);
    a << 0.0;
    b << 1.0;
    CHECK_THROWS_WITH_AS(stochastic_barycenter_approx(line, {line.point(a), line.point(b)}, 1e-9,
                                                      0.1, BudgetKind::hoeffding, 1),
                         doctest::Contains("exceeds the 1e9 guard"), std::invalid_argument);
  }
}

TEST_CASE("parallel barycenter") {
  Rng rng(515);
  EuclideanSpace plane(3);
  std::vector<Point> samples;
  Vector mean = Vector::Zero(3);
  const int n = 120;
  for (int i = 0; i < n; ++i) {
    samples.push_back(euclidean_point(3, rng));
    mean += samples.back().data;
  }
  mean /= n;

  SUBCASE("every batch split reproduces the global mean") {
    for (long p : {1L, 2L, 3L, 4L, 5L, 6L, 8L, 10L, 12L, 15L, 20L, 24L, 30L, 40L, 60L, 120L}) {
      const Point est = parallel_barycenter(plane, samples, {p, n / p}, SolveMethod::exact);
      CHECK((est.data - mean).norm() <= 1e-13);
    }
  }
  SUBCASE("plan mismatch is rejected") {
    CHECK_THROWS_AS(parallel_barycenter(plane, samples, {7, 17}), std::invalid_argument);
  }
  SUBCASE("permutation within a batch does not move the result") {
    SolverOptions options;
    options.tol = 1e-12;
    SphereSpace sphere(1.0, 2);
    std::vector<Point> pts;
    for (int i = 0; i < 12; ++i) pts.push_back(cap_point(sphere, sphere.north_pole(), 0.3, rng));
    const Point base = parallel_barycenter(sphere, pts, {3, 4}, SolveMethod::gradient, options);
    std::vector<Point> swapped = pts;
    std::swap(swapped[0], swapped[3]);  // same first batch, different order
    std::swap(swapped[5], swapped[6]);
    const Point moved =
        parallel_barycenter(sphere, swapped, {3, 4}, SolveMethod::gradient, options);
    CHECK(sphere.distance(base, moved) <= 1e-9);
  }
}

TEST_CASE("parallel tail bound composes the paper constants") {
  const double b = parallel_tail_bound(0.0, 0.0, 1.0, 4.0, 100, std::exp(-1.0));
  CHECK(b == doctest::Approx(2.0 / 10.0 + 2.0 / 10.0).epsilon(1e-13));
  CHECK_THROWS_AS(parallel_tail_bound(0.0, 0.0, 1.0, 1.0, 0, 0.1), std::invalid_argument);
}

TEST_CASE("symmetrized samplers") {
  Rng rng(1618);
  auto plane = std::make_shared<EuclideanSpace>(2);
  const Point origin = plane->point(Vector::Zero(2));

  SUBCASE("constant at p stays at p") {
    auto base = std::make_shared<GaussianSampler>(plane, origin, 0.0);
    auto wrapped = symmetrize_sampler(plane, origin, base);
    for (int i = 0; i < 10; ++i) CHECK(plane->distance(wrapped->sample(rng), origin) == 0.0);
  }
  SUBCASE("constant offset becomes the two-point law with mean p") {
    Vector off(2);
    off << 0.25, -0.5;
    auto base = std::make_shared<GaussianSampler>(plane, plane->point(off), 0.0);
    auto wrapped = symmetrize_sampler(plane, origin, base);
    Vector acc = Vector::Zero(2);
    int plus = 0;
    const int draws = 10000;
    for (int i = 0; i < draws; ++i) {
      const Point x = wrapped->sample(rng);
      CHECK(std::min((x.data - off).norm(), (x.data + off).norm()) <= 1e-12);
      if ((x.data - off).norm() <= 1e-12) ++plus;
      acc += x.data;
    }
    CHECK(std::abs(static_cast<double>(plus) / draws - 0.5) < 0.015);
    CHECK((acc / draws).norm() < 3.0 * off.norm() / std::sqrt(static_cast<double>(draws)));
  }
  SUBCASE("sphere cap about q reflected through p centers the log at zero") {
    auto sphere = std::make_shared<SphereSpace>(1.0, 2);
    const Point pole = sphere->north_pole();
    const Point q = sphere->from_polar(0.35);
    auto base = std::make_shared<UniformCapSampler>(sphere, q, 0.2);
    auto wrapped = symmetrize_sampler(sphere, pole, base);
    const int draws = 10000;
    Vector acc = Vector::Zero(3);
    double acc_norm2 = 0.0;
    for (int i = 0; i < draws; ++i) {
      const Vector log = sphere->log(pole, wrapped->sample(rng)).components;
      acc += log;
      acc_norm2 += log.squaredNorm();
    }
    const Vector mean = acc / draws;
    const double sigma_hat = std::sqrt(acc_norm2 / draws);
    CHECK(mean.norm() <= 3.0 * sigma_hat / std::sqrt(static_cast<double>(draws)));
  }
  SUBCASE("batch barycenters of a symmetric law stay symmetric in the MC sense") {
    auto sphere = std::make_shared<SphereSpace>(1.0, 2);
    const Point pole = sphere->north_pole();
    auto base = std::make_shared<UniformCapSampler>(sphere, sphere->from_polar(0.25), 0.15);
    auto wrapped = symmetrize_sampler(sphere, pole, base);
    SolverOptions options;
    options.tol = 1e-10;
    const int batches = 2000, batch_size = 4;
    Rng stream(31337);
    Vector acc = Vector::Zero(3);
    double acc_norm2 = 0.0;
    for (int b = 0; b < batches; ++b) {
      Rng sub = stream.stream(static_cast<std::uint64_t>(b));
      std::vector<Point> batch;
      for (int i = 0; i < batch_size; ++i) batch.push_back(wrapped->sample(sub));
      const Point y =
          empirical_barycenter(*sphere, batch, SolveMethod::gradient, options).result;
      const Vector log = sphere->log(pole, y).components;
      acc += log;
      acc_norm2 += log.squaredNorm();
    }
    const Vector mean = acc / batches;
    const double sigma_hat = std::sqrt(acc_norm2 / batches);
    CHECK(mean.norm() <= 3.0 * sigma_hat / std::sqrt(static_cast<double>(batches)));
  }
}
