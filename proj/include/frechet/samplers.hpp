#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "frechet/geometry.hpp"
#include "frechet/tree.hpp"

namespace frechet {

/// Distribution with a barycenter known by construction. Samplers are pure
/// given their generator stream.
class Sampler {
 public:
  virtual ~Sampler() = default;

  virtual Point sample(Rng& rng) const = 0;

  /// Population barycenter.
  virtual const Point& center() const = 0;

  /// Radius of a ball around a point that carries the support
  /// (+infinity when unbounded).
  virtual double support_radius() const = 0;

  /// Total variance when available in closed form.
  virtual std::optional<double> total_variance() const { return std::nullopt; }

  /// Metric sub-Gaussian parameter K^2 when known (4R^2 for bounded laws).
  virtual std::optional<double> subgaussian_k2() const;

  virtual std::string describe() const = 0;
};

/// Uniform draw from the geodesic ball B(center, r) w.r.t. the Riemannian
/// volume: uniform tangent direction and a radius with the volume-element
/// density (t^{d-1}, (sin(sqrt(k) t)/sqrt(k))^{d-1} or the sinh analogue),
/// inverted by monotone bisection. Constant-curvature spaces only.
class UniformCapSampler : public Sampler {
 public:
  UniformCapSampler(std::shared_ptr<const Space> space, Point center, double radius);

  Point sample(Rng& rng) const override;
  const Point& center() const override { return center_; }
  double support_radius() const override { return radius_; }
  std::string describe() const override;

  /// Radial CDF on [0, radius]; exposed for the histogram checks.
  double radial_cdf(double t) const;
  double sample_radius(Rng& rng) const;

 private:
  double density(double t) const;
  double unnormalized_cdf(double t) const;

  std::shared_ptr<const Space> space_;
  Point center_;
  double radius_;
  int manifold_dim_;
  std::vector<double> grid_cdf_;  // prefix CDF on a uniform grid
  double grid_step_;
};

/// exp_p(+r u) or exp_p(-r u) with equal probability for a fixed unit
/// tangent u; the barycenter is p and the total variance exactly r^2.
class TwoPointSampler : public Sampler {
 public:
  TwoPointSampler(std::shared_ptr<const Space> space, Point center, TangentVector direction,
                  double radius);

  Point sample(Rng& rng) const override;
  const Point& center() const override { return center_; }
  double support_radius() const override { return radius_; }
  std::optional<double> total_variance() const override { return radius_ * radius_; }
  std::string describe() const override;

 private:
  std::shared_ptr<const Space> space_;
  Point center_;
  Point plus_;
  Point minus_;
  double radius_;
};

/// Categorical draw over tree leaves with the given weights.
class TreeLeavesSampler : public Sampler {
 public:
  TreeLeavesSampler(std::shared_ptr<const TreeSpace> space, std::vector<int> leaves,
                    std::vector<double> weights, Point center);

  Point sample(Rng& rng) const override;
  const Point& center() const override { return center_; }
  double support_radius() const override;
  std::optional<double> total_variance() const override;
  std::string describe() const override;

 private:
  std::shared_ptr<const TreeSpace> space_;
  std::vector<Point> loci_;
  std::vector<double> cumulative_;
  std::vector<double> weights_;
  Point center_;
};

/// Isotropic Gaussian in Euclidean space; total variance d sigma^2 and
/// metric sub-Gaussian parameter sigma^2 (Gaussian Lipschitz concentration).
class GaussianSampler : public Sampler {
 public:
  GaussianSampler(std::shared_ptr<const Space> space, Point mean, double sigma);

  Point sample(Rng& rng) const override;
  const Point& center() const override { return mean_; }
  double support_radius() const override { return kInfinity; }
  std::optional<double> total_variance() const override;
  std::optional<double> subgaussian_k2() const override { return sigma_ * sigma_; }
  std::string describe() const override;

 private:
  std::shared_ptr<const Space> space_;
  Point mean_;
  double sigma_;
};

/// Monte Carlo estimate of the total variance E d(X, b*)^2.
struct VarianceEstimate {
  double sigma2 = 0.0;
  double stderr_ = 0.0;
};

VarianceEstimate estimate_total_variance(const Space& space, const Sampler& sampler,
                                         const Point& b_star, long n_mc, Rng& rng);

}  // namespace frechet
