#pragma once

#include <memory>

#include "frechet/geometry.hpp"

namespace frechet {

/// Flat space R^d; points are coordinate vectors.
class EuclideanSpace : public Space {
 public:
  explicit EuclideanSpace(int dim);

  SpaceKind kind() const override { return SpaceKind::euclidean; }
  double curvature_bound() const override { return 0.0; }
  bool smooth() const override { return true; }
  int point_size() const override { return dim_; }
  int dim() const { return dim_; }

  void validate_point(const Point& p) const override;
  double distance(const Point& x, const Point& y) const override;
  Point interpolate(const Point& x, const Point& y, double t) const override;
  TangentVector log(const Point& x, const Point& y) const override;
  Point exp(const Point& x, const TangentVector& v) const override;
  double tangent_dot(const TangentVector& u, const TangentVector& v) const override;
  TangentVector random_unit_tangent(const Point& x, Rng& rng) const override;

  Point point(const Vector& coords) const;

 private:
  int dim_;
};

/// Sphere of curvature kappa > 0 (radius 1/sqrt(kappa)), dimension d,
/// embedded in R^{d+1}; points are ambient vectors, metric is arc length.
class SphereSpace : public Space {
 public:
  SphereSpace(double kappa, int dim);

  SpaceKind kind() const override { return SpaceKind::sphere; }
  double curvature_bound() const override { return kappa_; }
  bool smooth() const override { return true; }
  int point_size() const override { return dim_ + 1; }
  int dim() const { return dim_; }
  double radius() const { return radius_; }

  void validate_point(const Point& p) const override;
  double distance(const Point& x, const Point& y) const override;
  Point interpolate(const Point& x, const Point& y, double t) const override;
  TangentVector log(const Point& x, const Point& y) const override;
  Point exp(const Point& x, const TangentVector& v) const override;
  double tangent_dot(const TangentVector& u, const TangentVector& v) const override;
  TangentVector random_unit_tangent(const Point& x, Rng& rng) const override;

  Point point(const Vector& ambient) const;
  /// Point at the given colatitude from the north pole along the meridian
  /// through ambient axis `axis` (axis < dim).
  Point from_polar(double colatitude, int axis = 0) const;
  Point north_pole() const;

 private:
  /// Cosine of the angle between x and y, clamped into [-1, 1] with
  /// tolerance 1e-9; values further outside raise GeodesicError.
  double angle_cosine(const Point& x, const Point& y) const;

  double kappa_;
  double radius_;
  int dim_;
};

/// Hyperboloid model of curvature kappa < 0, dimension d, in Minkowski
/// space R^{d,1}; points have <x,x> = 1/kappa and positive last coordinate.
class HyperbolicSpace : public Space {
 public:
  HyperbolicSpace(double kappa, int dim);

  SpaceKind kind() const override { return SpaceKind::hyperbolic; }
  double curvature_bound() const override { return kappa_; }
  bool smooth() const override { return true; }
  int point_size() const override { return dim_ + 1; }
  int dim() const { return dim_; }
  double scale() const { return scale_; }

  void validate_point(const Point& p) const override;
  double distance(const Point& x, const Point& y) const override;
  Point interpolate(const Point& x, const Point& y, double t) const override;
  TangentVector log(const Point& x, const Point& y) const override;
  Point exp(const Point& x, const TangentVector& v) const override;
  double tangent_dot(const TangentVector& u, const TangentVector& v) const override;
  TangentVector random_unit_tangent(const Point& x, Rng& rng) const override;

  Point point(const Vector& ambient) const;
  Point base_point() const;  // (0,...,0,1/sqrt(-kappa))

  static double minkowski(const Vector& a, const Vector& b);

 private:
  double kappa_;
  double scale_;  // 1/sqrt(-kappa)
  int dim_;
};

/// Symmetric positive definite d x d matrices under the affine-invariant
/// metric d(A,B) = ||log(A^{-1/2} B A^{-1/2})||_F; points are row-major
/// flattened matrices.
class SpdSpace : public Space {
 public:
  explicit SpdSpace(int dim);

  SpaceKind kind() const override { return SpaceKind::spd; }
  double curvature_bound() const override { return 0.0; }
  bool smooth() const override { return true; }
  int point_size() const override { return dim_ * dim_; }
  int dim() const { return dim_; }

  void validate_point(const Point& p) const override;
  double distance(const Point& x, const Point& y) const override;
  Point interpolate(const Point& x, const Point& y, double t) const override;
  TangentVector log(const Point& x, const Point& y) const override;
  Point exp(const Point& x, const TangentVector& v) const override;
  double tangent_dot(const TangentVector& u, const TangentVector& v) const override;
  TangentVector random_unit_tangent(const Point& x, Rng& rng) const override;

  Point point(const Matrix& m) const;
  Point identity() const;
  Matrix as_matrix(const Point& p) const;
  Matrix as_matrix(const Vector& data) const;

  /// Symmetric eigendecomposition power; eigenvalues below
  /// 1e-12 * lambda_max are an error, never clamped.
  Matrix sym_power(const Matrix& m, double exponent) const;
  Matrix sym_log(const Matrix& m) const;
  Matrix sym_exp(const Matrix& m) const;

 private:
  int dim_;
};

std::shared_ptr<Space> make_space(SpaceKind kind, double kappa, int dim);

}  // namespace frechet
