#pragma once

#include <optional>
#include <string>
#include <vector>

#include "frechet/geometry.hpp"

namespace frechet {

/// Step rule t_k for the iterated barycenter, k >= 2. `harmonic` is t_k = 1/k,
/// `positive_curvature` is t_k = 2/(alpha k + 2), `explicit_list` stores
/// t_2..t_n directly.
struct StepSchedule {
  enum class Kind { harmonic, positive_curvature, explicit_list };

  Kind kind = Kind::harmonic;
  double alpha = 0.0;             // positive_curvature only
  std::vector<double> steps;      // explicit_list only, t_2 first

  static StepSchedule harmonic();
  static StepSchedule positive_curvature(double alpha);
  static StepSchedule explicit_list(std::vector<double> steps);

  double step(long k) const;
};

enum class SolveMethod { exact, cyclic, gradient };

SolveMethod solve_method_from_string(const std::string& name);
std::string to_string(SolveMethod method);

struct SolverOptions {
  double tol = 1e-9;
  long max_rounds = 10000;     // cyclic passes / gradient steps
  double gradient_step = 0.5;  // eta
};

struct SolverReport {
  Point result;
  long iterations = 0;
  double final_movement = 0.0;
  std::string method;
  bool converged = true;
};

/// Mean of squared distances from x to the points.
double frechet_value(const Space& space, const std::vector<Point>& points, const Point& x);

/// -(2/n) sum_i Log_x(x_i); vanishes at the empirical barycenter.
TangentVector frechet_gradient(const Space& space, const std::vector<Point>& points,
                               const Point& x);

/// One-pass inductive mean b_k = gamma(b_{k-1}, x_k; t_k); order-sensitive.
SolverReport iterated_barycenter(const Space& space, const std::vector<Point>& points,
                                 const StepSchedule& schedule);

/// Empirical barycenter by the requested method. `exact` is the coordinate
/// mean (Euclidean only); `cyclic` repeats inductive passes with a global
/// harmonic counter until the per-pass movement drops below
/// tol * (1 + diameter bound); `gradient` runs Riemannian gradient descent
/// on smooth spaces until the gradient norm drops below tol.
SolverReport empirical_barycenter(const Space& space, const std::vector<Point>& points,
                                  SolveMethod method, const SolverOptions& options = {});

/// Geodesic 1-center approximation (iterative farthest-point shrinking);
/// returns center and covering radius.
std::pair<Point, double> min_enclosing_ball(const Space& space, const std::vector<Point>& points,
                                            int iterations = 1000);

}  // namespace frechet
