#include "frechet/spaces.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace frechet {

namespace {

constexpr double kClampTol = 1e-9;      // inverse-trig domain slack
constexpr double kAntipodalTol = 1e-12; // cos(angle) <= -1 + tol is antipodal

Point make_point(SpaceKind kind, Vector data) {
  Point p;
  p.kind = kind;
  p.data = std::move(data);
  return p;
}

Vector gaussian_vector(int n, Rng& rng) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

// ---------------------------------------------------------------------------
// Euclidean

EuclideanSpace::EuclideanSpace(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("euclidean dimension must be >= 1");
}

void EuclideanSpace::validate_point(const Point& p) const {
  check_size(p);
  if (!p.data.allFinite()) throw std::invalid_argument("euclidean point has non-finite entries");
}

double EuclideanSpace::distance(const Point& x, const Point& y) const {
  check_same_kind(x, y);
  return (x.data - y.data).norm();
}

Point EuclideanSpace::interpolate(const Point& x, const Point& y, double t) const {
  check_same_kind(x, y);
  return make_point(kind(), (1.0 - t) * x.data + t * y.data);
}

TangentVector EuclideanSpace::log(const Point& x, const Point& y) const {
  check_same_kind(x, y);
  return {x, y.data - x.data};
}

Point EuclideanSpace::exp(const Point& x, const TangentVector& v) const {
  return make_point(kind(), x.data + v.components);
}

double EuclideanSpace::tangent_dot(const TangentVector& u, const TangentVector& v) const {
  return u.components.dot(v.components);
}

TangentVector EuclideanSpace::random_unit_tangent(const Point& x, Rng& rng) const {
  Vector v;
  do { v = gaussian_vector(dim_, rng); } while (v.norm() == 0.0);
  return {x, v / v.norm()};
}

Point EuclideanSpace::point(const Vector& coords) const {
  Point p = make_point(kind(), coords);
  validate_point(p);
  return p;
}

// ---------------------------------------------------------------------------
// Sphere

SphereSpace::SphereSpace(double kappa, int dim) : kappa_(kappa), dim_(dim) {
  if (!(kappa > 0.0)) throw std::invalid_argument("sphere curvature must be positive");
  if (dim < 1) throw std::invalid_argument("sphere dimension must be >= 1");
  radius_ = 1.0 / std::sqrt(kappa);
}

void SphereSpace::validate_point(const Point& p) const {
  check_size(p);
  if (!p.data.allFinite()) throw std::invalid_argument("sphere point has non-finite entries");
  const double norm = p.data.norm();
  if (std::abs(norm - radius_) > 1e-12 * radius_)
    throw std::invalid_argument("sphere point does not have norm 1/sqrt(kappa)");
}

double SphereSpace::angle_cosine(const Point& x, const Point& y) const {
  const double c = kappa_ * x.data.dot(y.data);
  if (c > 1.0 + kClampTol || c < -1.0 - kClampTol)
    throw GeodesicError("sphere inner product outside the arccos domain");
  return std::min(1.0, std::max(-1.0, c));
}

double SphereSpace::distance(const Point& x, const Point& y) const {
  check_same_kind(x, y);
  return radius_ * std::acos(angle_cosine(x, y));
}

Point SphereSpace::interpolate(const Point& x, const Point& y, double t) const {
  check_same_kind(x, y);
  const double c = angle_cosine(x, y);
  if (c <= -1.0 + kAntipodalTol)
    throw GeodesicError("geodesic is not unique between antipodal sphere points");
  const double theta = std::acos(c);
  if (theta == 0.0) return x;
  const double s = std::sin(theta);
  const double wx = std::sin((1.0 - t) * theta) / s;
  const double wy = std::sin(t * theta) / s;
  Vector out = wx * x.data + wy * y.data;
  out *= radius_ / out.norm();  // guard round-off drift off the sphere
  return make_point(kind(), out);
}

TangentVector SphereSpace::log(const Point& x, const Point& y) const {
  check_same_kind(x, y);
  const double c = angle_cosine(x, y);
  if (c <= -1.0 + kAntipodalTol)
    throw GeodesicError("log map is undefined for antipodal sphere points");
  const double theta = std::acos(c);
  if (theta == 0.0) return {x, Vector::Zero(point_size())};
  const Vector u = y.data - c * x.data;  // orthogonal to x, norm radius*sin(theta)
  return {x, (theta / std::sin(theta)) * u};
}

Point SphereSpace::exp(const Point& x, const TangentVector& v) const {
  const double norm = v.components.norm();
  if (norm >= M_PI * radius_)
    throw GeodesicError("sphere exp norm must be below the model diameter");
  if (norm == 0.0) return x;
  const double theta = norm / radius_;
  Vector out = std::cos(theta) * x.data + std::sin(theta) * radius_ * v.components / norm;
  out *= radius_ / out.norm();
  return make_point(kind(), out);
}

double SphereSpace::tangent_dot(const TangentVector& u, const TangentVector& v) const {
  return u.components.dot(v.components);
}

TangentVector SphereSpace::random_unit_tangent(const Point& x, Rng& rng) const {
  const Vector unit = x.data / radius_;
  Vector v;
  double norm = 0.0;
  do {
    v = gaussian_vector(point_size(), rng);
    v -= v.dot(unit) * unit;
    norm = v.norm();
  } while (norm == 0.0);
  return {x, v / norm};
}

Point SphereSpace::point(const Vector& ambient) const {
  Point p = make_point(kind(), ambient);
  validate_point(p);
  return p;
}

Point SphereSpace::from_polar(double colatitude, int axis) const {
  if (axis < 0 || axis >= dim_) throw std::invalid_argument("meridian axis out of range");
  Vector v = Vector::Zero(point_size());
  v[axis] = radius_ * std::sin(colatitude);
  v[dim_] = radius_ * std::cos(colatitude);
  return make_point(kind(), v);
}

Point SphereSpace::north_pole() const { return from_polar(0.0); }

// ---------------------------------------------------------------------------
// Hyperboloid

HyperbolicSpace::HyperbolicSpace(double kappa, int dim) : kappa_(kappa), dim_(dim) {
  if (!(kappa < 0.0)) throw std::invalid_argument("hyperbolic curvature must be negative");
  if (dim < 1) throw std::invalid_argument("hyperbolic dimension must be >= 1");
  scale_ = 1.0 / std::sqrt(-kappa);
}

double HyperbolicSpace::minkowski(const Vector& a, const Vector& b) {
  const int d = static_cast<int>(a.size()) - 1;
  return a.head(d).dot(b.head(d)) - a[d] * b[d];
}

void HyperbolicSpace::validate_point(const Point& p) const {
  check_size(p);
  if (!p.data.allFinite()) throw std::invalid_argument("hyperbolic point has non-finite entries");
  const double form = minkowski(p.data, p.data);
  if (std::abs(form - 1.0 / kappa_) > 1e-12 * std::abs(1.0 / kappa_))
    throw std::invalid_argument("hyperbolic point is not on the hyperboloid sheet");
  if (!(p.data[dim_] > 0.0))
    throw std::invalid_argument("hyperbolic point must lie on the upper sheet");
}

double HyperbolicSpace::distance(const Point& x, const Point& y) const {
  check_same_kind(x, y);
  double c = kappa_ * minkowski(x.data, y.data);  // cosh of the angle, >= 1
  if (c < 1.0 - kClampTol)
    throw GeodesicError("hyperbolic inner product outside the arccosh domain");
  c = std::max(1.0, c);
  return scale_ * std::acosh(c);
}

Point HyperbolicSpace::interpolate(const Point& x, const Point& y, double t) const {
  check_same_kind(x, y);
  const double d = distance(x, y);
  if (d == 0.0) return x;
  const double theta = d / scale_;
  const double s = std::sinh(theta);
  const double wx = std::sinh((1.0 - t) * theta) / s;
  const double wy = std::sinh(t * theta) / s;
  Vector out = wx * x.data + wy * y.data;
  // Re-normalize onto the sheet against round-off drift.
  const double form = minkowski(out, out);
  out *= std::sqrt((1.0 / -kappa_) / -form);
  return make_point(kind(), out);
}

TangentVector HyperbolicSpace::log(const Point& x, const Point& y) const {
  check_same_kind(x, y);
  const double d = distance(x, y);
  if (d == 0.0) return {x, Vector::Zero(point_size())};
  const double theta = d / scale_;
  const double c = std::cosh(theta);
  const Vector u = y.data - c * x.data;  // Minkowski-orthogonal to x
  return {x, (theta / std::sinh(theta)) * u};
}

Point HyperbolicSpace::exp(const Point& x, const TangentVector& v) const {
  const double sq = minkowski(v.components, v.components);
  if (sq < 0.0) throw GeodesicError("vector is not tangent to the hyperboloid");
  const double norm = std::sqrt(sq);
  if (norm == 0.0) return x;
  const double theta = norm / scale_;
  Vector out = std::cosh(theta) * x.data + std::sinh(theta) * scale_ * v.components / norm;
  const double form = minkowski(out, out);
  out *= std::sqrt((1.0 / -kappa_) / -form);
  return make_point(kind(), out);
}

double HyperbolicSpace::tangent_dot(const TangentVector& u, const TangentVector& v) const {
  return minkowski(u.components, v.components);
}

TangentVector HyperbolicSpace::random_unit_tangent(const Point& x, Rng& rng) const {
  // Project a Gaussian ambient vector Minkowski-orthogonally onto T_x, then
  // orthonormalize coordinates via the (positive definite) induced metric.
  Vector v;
  double norm2 = 0.0;
  do {
    v = gaussian_vector(point_size(), rng);
    const double coeff = minkowski(v, x.data) / minkowski(x.data, x.data);
    v -= coeff * x.data;
    norm2 = minkowski(v, v);
  } while (!(norm2 > 0.0));
  return {x, v / std::sqrt(norm2)};
}

Point HyperbolicSpace::point(const Vector& ambient) const {
  Point p = make_point(kind(), ambient);
  validate_point(p);
  return p;
}

Point HyperbolicSpace::base_point() const {
  Vector v = Vector::Zero(point_size());
  v[dim_] = scale_;
  return make_point(kind(), v);
}

// ---------------------------------------------------------------------------
// SPD with the affine-invariant metric

SpdSpace::SpdSpace(int dim) : dim_(dim) {
  if (dim < 1) throw std::invalid_argument("spd dimension must be >= 1");
}

Matrix SpdSpace::as_matrix(const Vector& data) const {
  return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
             data.data(), dim_, dim_)
      .eval();
}

Matrix SpdSpace::as_matrix(const Point& p) const { return as_matrix(p.data); }

namespace {

Vector flatten_row_major(const Matrix& m) {
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> rm = m;
  return Eigen::Map<const Vector>(rm.data(), rm.size());
}

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

void SpdSpace::validate_point(const Point& p) const {
  check_size(p);
  if (!p.data.allFinite()) throw std::invalid_argument("spd point has non-finite entries");
  const Matrix m = as_matrix(p);
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw std::invalid_argument("spd point is not symmetric");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m), Eigen::EigenvaluesOnly);
  const double lambda_max = solver.eigenvalues().maxCoeff();
  if (!(solver.eigenvalues().minCoeff() > 1e-12 * lambda_max) || !(lambda_max > 0.0))
    throw std::invalid_argument("spd point is not positive definite");
}

Matrix SpdSpace::sym_power(const Matrix& m, double exponent) const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
  const Vector& ev = solver.eigenvalues();
  const double lambda_max = ev.maxCoeff();
  if (!(lambda_max > 0.0) || ev.minCoeff() < 1e-12 * lambda_max)
    throw std::invalid_argument("matrix is not safely positive definite");
  Vector powered(ev.size());
  for (int i = 0; i < ev.size(); ++i) powered[i] = std::pow(ev[i], exponent);
  return symmetrize(solver.eigenvectors() * powered.asDiagonal() *
                    solver.eigenvectors().transpose());
}

Matrix SpdSpace::sym_log(const Matrix& m) const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
  const Vector& ev = solver.eigenvalues();
  const double lambda_max = ev.maxCoeff();
  if (!(lambda_max > 0.0) || ev.minCoeff() < 1e-12 * lambda_max)
    throw std::invalid_argument("matrix is not safely positive definite");
  Vector logged(ev.size());
  for (int i = 0; i < ev.size(); ++i) logged[i] = std::log(ev[i]);
  return symmetrize(solver.eigenvectors() * logged.asDiagonal() *
                    solver.eigenvectors().transpose());
}

Matrix SpdSpace::sym_exp(const Matrix& m) const {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m));
  const Vector& ev = solver.eigenvalues();
  Vector exped(ev.size());
  for (int i = 0; i < ev.size(); ++i) exped[i] = std::exp(ev[i]);
  return symmetrize(solver.eigenvectors() * exped.asDiagonal() *
                    solver.eigenvectors().transpose());
}

double SpdSpace::distance(const Point& x, const Point& y) const {
  check_same_kind(x, y);
  const Matrix a_inv_sqrt = sym_power(as_matrix(x), -0.5);
  const Matrix middle = symmetrize(a_inv_sqrt * as_matrix(y) * a_inv_sqrt);
  return sym_log(middle).norm();
}

Point SpdSpace::interpolate(const Point& x, const Point& y, double t) const {
  check_same_kind(x, y);
  const Matrix a_sqrt = sym_power(as_matrix(x), 0.5);
  const Matrix a_inv_sqrt = sym_power(as_matrix(x), -0.5);
  const Matrix middle = symmetrize(a_inv_sqrt * as_matrix(y) * a_inv_sqrt);
  const Matrix out = symmetrize(a_sqrt * sym_power(middle, t) * a_sqrt);
  return make_point(kind(), flatten_row_major(out));
}

TangentVector SpdSpace::log(const Point& x, const Point& y) const {
  check_same_kind(x, y);
  const Matrix a_sqrt = sym_power(as_matrix(x), 0.5);
  const Matrix a_inv_sqrt = sym_power(as_matrix(x), -0.5);
  const Matrix middle = symmetrize(a_inv_sqrt * as_matrix(y) * a_inv_sqrt);
  const Matrix v = symmetrize(a_sqrt * sym_log(middle) * a_sqrt);
  return {x, flatten_row_major(v)};
}

Point SpdSpace::exp(const Point& x, const TangentVector& v) const {
  const Matrix a_sqrt = sym_power(as_matrix(x), 0.5);
  const Matrix a_inv_sqrt = sym_power(as_matrix(x), -0.5);
  const Matrix middle = symmetrize(a_inv_sqrt * as_matrix(v.components) * a_inv_sqrt);
  const Matrix out = symmetrize(a_sqrt * sym_exp(middle) * a_sqrt);
  return make_point(kind(), flatten_row_major(out));
}

double SpdSpace::tangent_dot(const TangentVector& u, const TangentVector& v) const {
  const Matrix base_inv = sym_power(as_matrix(u.base), -1.0);
  const Matrix mu = as_matrix(u.components);
  const Matrix mv = as_matrix(v.components);
  return (base_inv * mu * base_inv * mv).trace();
}

TangentVector SpdSpace::random_unit_tangent(const Point& x, Rng& rng) const {
  // Gaussian coefficients on an orthonormal basis of symmetric matrices at
  // the identity, transported to x by congruence with x^{1/2}.
  Matrix s(dim_, dim_);
  for (int i = 0; i < dim_; ++i) {
    s(i, i) = rng.normal();
    for (int j = i + 1; j < dim_; ++j) {
      const double v = rng.normal() / std::sqrt(2.0);
      s(i, j) = v;
      s(j, i) = v;
    }
  }
  const double norm = s.norm();
  if (norm == 0.0) return random_unit_tangent(x, rng);
  const Matrix a_sqrt = sym_power(as_matrix(x), 0.5);
  const Matrix v = symmetrize(a_sqrt * (s / norm) * a_sqrt);
  return {x, flatten_row_major(v)};
}

Point SpdSpace::point(const Matrix& m) const {
  Point p = make_point(kind(), flatten_row_major(m));
  validate_point(p);
  return p;
}

Point SpdSpace::identity() const {
  return make_point(kind(), flatten_row_major(Matrix::Identity(dim_, dim_)));
}

std::shared_ptr<Space> make_space(SpaceKind kind, double kappa, int dim) {
  switch (kind) {
    case SpaceKind::euclidean: return std::make_shared<EuclideanSpace>(dim);
    case SpaceKind::sphere: return std::make_shared<SphereSpace>(kappa, dim);
    case SpaceKind::hyperbolic: return std::make_shared<HyperbolicSpace>(kappa, dim);
    case SpaceKind::spd: return std::make_shared<SpdSpace>(dim);
    case SpaceKind::tree:
      throw std::invalid_argument("tree spaces are built from an explicit edge list");
  }
  throw std::invalid_argument("unknown space kind");
}

}  // namespace frechet
