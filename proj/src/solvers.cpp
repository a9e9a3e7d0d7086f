#include "frechet/solvers.hpp"

#include <cmath>

#include "frechet/spaces.hpp"

namespace frechet {

StepSchedule StepSchedule::harmonic() { return {Kind::harmonic, 0.0, {}}; }

StepSchedule StepSchedule::positive_curvature(double alpha) {
  if (!(alpha > 0.0)) throw std::invalid_argument("schedule alpha must be positive");
  return {Kind::positive_curvature, alpha, {}};
}

StepSchedule StepSchedule::explicit_list(std::vector<double> steps) {
  for (double t : steps)
    if (!(t > 0.0) || !(t < 1.0))
      throw std::invalid_argument("explicit schedule steps must lie in (0,1)");
  return {Kind::explicit_list, 0.0, std::move(steps)};
}

double StepSchedule::step(long k) const {
  if (k < 2) throw std::invalid_argument("step index must be >= 2");
  switch (kind) {
    case Kind::harmonic:
      return 1.0 / static_cast<double>(k);
    case Kind::positive_curvature:
      if (!(alpha > 0.0)) throw std::invalid_argument("schedule alpha must be positive");
      return 2.0 / (alpha * static_cast<double>(k) + 2.0);
    case Kind::explicit_list: {
      const std::size_t index = static_cast<std::size_t>(k - 2);
      if (index >= steps.size())
        throw std::invalid_argument("step index beyond the explicit schedule");
      return steps[index];
    }
  }
  throw std::invalid_argument("unknown schedule kind");
}

SolveMethod solve_method_from_string(const std::string& name) {
  if (name == "exact") return SolveMethod::exact;
  if (name == "cyclic") return SolveMethod::cyclic;
  if (name == "gradient") return SolveMethod::gradient;
  throw std::invalid_argument("unknown solve method: " + name);
}

std::string to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::exact: return "exact";
    case SolveMethod::cyclic: return "cyclic";
    case SolveMethod::gradient: return "gradient";
  }
  return "?";
}

double frechet_value(const Space& space, const std::vector<Point>& points, const Point& x) {
  if (points.empty()) throw std::invalid_argument("point list must be nonempty");
  double sum = 0.0;
  for (const Point& p : points) {
    const double d = space.distance(p, x);
    sum += d * d;
  }
  return sum / static_cast<double>(points.size());
}

TangentVector frechet_gradient(const Space& space, const std::vector<Point>& points,
                               const Point& x) {
  if (points.empty()) throw std::invalid_argument("point list must be nonempty");
  if (!space.smooth())
    throw GeodesicError("frechet gradient needs a smooth space");
  Vector acc = Vector::Zero(x.data.size());
  for (const Point& p : points) acc += space.log(x, p).components;
  return {x, (-2.0 / static_cast<double>(points.size())) * acc};
}

SolverReport iterated_barycenter(const Space& space, const std::vector<Point>& points,
                                 const StepSchedule& schedule) {
  if (points.empty()) throw std::invalid_argument("point list must be nonempty");
  Point current = points.front();
  double movement = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double t = schedule.step(static_cast<long>(i) + 1);
    Point next = space.interpolate(current, points[i], t);
    movement = space.distance(current, next);
    current = std::move(next);
  }
  SolverReport report;
  report.result = std::move(current);
  report.iterations = static_cast<long>(points.size());
  report.final_movement = movement;
  report.method = "iterated";
  return report;
}

namespace {

/// Upper bound on the instance diameter: twice the max distance to x_1.
double diameter_bound(const Space& space, const std::vector<Point>& points) {
  double radius = 0.0;
  for (const Point& p : points) radius = std::max(radius, space.distance(points.front(), p));
  return 2.0 * radius;
}

SolverReport exact_barycenter(const Space& space, const std::vector<Point>& points) {
  if (space.kind() != SpaceKind::euclidean)
    throw std::invalid_argument("exact barycenter is available in Euclidean space only");
  Vector mean = Vector::Zero(points.front().data.size());
  for (const Point& p : points) mean += p.data;
  mean /= static_cast<double>(points.size());
  SolverReport report;
  report.result = Point{SpaceKind::euclidean, std::move(mean)};
  report.iterations = 1;
  report.final_movement = 0.0;
  report.method = "exact";
  return report;
}

SolverReport cyclic_barycenter(const Space& space, const std::vector<Point>& points,
                               const SolverOptions& options) {
  const double stop = options.tol * (1.0 + diameter_bound(space, points));
  Point current = points.front();
  long k = 1;
  SolverReport report;
  report.method = "cyclic";
  report.converged = false;
  long pass = 0;
  for (pass = 0; pass < options.max_rounds; ++pass) {
    const Point before = current;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (pass == 0 && i == 0) continue;  // b_1 = x_1
      ++k;
      current = space.interpolate(current, points[i], 1.0 / static_cast<double>(k));
    }
    report.final_movement = space.distance(before, current);
    if (report.final_movement < stop) {
      report.converged = true;
      ++pass;
      break;
    }
  }
  report.result = std::move(current);
  report.iterations = pass;
  return report;
}

SolverReport gradient_barycenter(const Space& space, const std::vector<Point>& points,
                                 const SolverOptions& options) {
  if (!space.smooth())
    throw std::invalid_argument("gradient barycenter needs a smooth space");
  // Warm start from one inductive pass.
  Point current = iterated_barycenter(space, points, StepSchedule::harmonic()).result;
  SolverReport report;
  report.method = "gradient";
  report.converged = false;
  long step = 0;
  for (step = 0; step < options.max_rounds; ++step) {
    TangentVector grad = frechet_gradient(space, points, current);
    const double norm = space.tangent_norm(grad);
    report.final_movement = norm;
    if (norm < options.tol) {
      report.converged = true;
      break;
    }
    grad.components *= -options.gradient_step;
    current = space.exp(current, grad);
  }
  report.result = std::move(current);
  report.iterations = step;
  return report;
}

}  // namespace

SolverReport empirical_barycenter(const Space& space, const std::vector<Point>& points,
                                  SolveMethod method, const SolverOptions& options) {
  if (points.empty()) throw std::invalid_argument("point list must be nonempty");
  if (points.size() == 1) {
    SolverReport report;
    report.result = points.front();
    report.iterations = 0;
    report.final_movement = 0.0;
    report.method = to_string(method);
    return report;
  }
  switch (method) {
    case SolveMethod::exact: return exact_barycenter(space, points);
    case SolveMethod::cyclic: return cyclic_barycenter(space, points, options);
    case SolveMethod::gradient: return gradient_barycenter(space, points, options);
  }
  throw std::invalid_argument("unknown solve method");
}

std::pair<Point, double> min_enclosing_ball(const Space& space, const std::vector<Point>& points,
                                            int iterations) {
  if (points.empty()) throw std::invalid_argument("point list must be nonempty");
  Point center = points.front();
  for (int k = 1; k <= iterations; ++k) {
    double far_dist = 0.0;
    const Point* far = &points.front();
    for (const Point& p : points) {
      const double d = space.distance(center, p);
      if (d > far_dist) {
        far_dist = d;
        far = &p;
      }
    }
    if (far_dist == 0.0) break;
    center = space.interpolate(center, *far, 1.0 / static_cast<double>(k + 1));
  }
  double radius = 0.0;
  for (const Point& p : points) radius = std::max(radius, space.distance(center, p));
  return {std::move(center), radius};
}

}  // namespace frechet
