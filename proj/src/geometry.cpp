#include "frechet/geometry.hpp"

#include <cmath>
#include <sstream>

namespace frechet {

std::string to_string(SpaceKind kind) {
  switch (kind) {
    case SpaceKind::euclidean: return "euclidean";
    case SpaceKind::sphere: return "sphere";
    case SpaceKind::hyperbolic: return "hyperbolic";
    case SpaceKind::spd: return "spd";
    case SpaceKind::tree: return "tree";
  }
  return "?";
}

SpaceKind space_kind_from_string(const std::string& name) {
  if (name == "euclidean") return SpaceKind::euclidean;
  if (name == "sphere") return SpaceKind::sphere;
  if (name == "hyperbolic") return SpaceKind::hyperbolic;
  if (name == "spd") return SpaceKind::spd;
  if (name == "tree") return SpaceKind::tree;
  throw std::invalid_argument("unknown space kind: " + name);
}

double model_diameter(double kappa) {
  if (kappa > 0.0) return M_PI / std::sqrt(kappa);
  return kInfinity;
}

DomainValidation validate_domain(const ConvexDomainSpec& spec, const GeometrySpec& geom) {
  DomainValidation report;
  if (spec.radius < 0.0) {
    report.ok = false;
    report.violations.push_back("radius must be nonnegative");
    return report;
  }
  if (geom.kappa <= 0.0) return report;  // any closed convex set qualifies

  const double diam = model_diameter(geom.kappa);
  if (!(spec.epsilon > 0.0)) {
    report.ok = false;
    report.violations.push_back("epsilon must be positive when kappa > 0");
    return report;
  }
  if (!(spec.epsilon < diam / 2.0)) {
    report.ok = false;
    std::ostringstream os;
    os << "epsilon = " << spec.epsilon << " must be < D_kappa/2 = " << diam / 2.0;
    report.violations.push_back(os.str());
  }
  if (!(spec.radius < diam / 4.0)) {
    report.ok = false;
    std::ostringstream os;
    os << "radius = " << spec.radius << " must be < D_kappa/4 = " << diam / 4.0;
    report.violations.push_back(os.str());
  }
  const double theorem_radius = 0.5 * (diam / 2.0 - spec.epsilon);
  // Boundary slack: radius == (1/2)(D/2 - eps) is admissible, and derived
  // epsilons hit the boundary exactly up to round-off.
  if (spec.radius > theorem_radius * (1.0 + 1e-12)) {
    report.ok = false;
    std::ostringstream os;
    os << "radius = " << spec.radius << " must be <= (1/2)(D_kappa/2 - epsilon) = "
       << theorem_radius;
    report.violations.push_back(os.str());
  }
  return report;
}

void Space::check_same_kind(const Point& x, const Point& y) const {
  if (x.kind != kind() || y.kind != kind())
    throw std::invalid_argument("point does not belong to this space");
  if (x.data.size() != y.data.size())
    throw std::invalid_argument("dimension mismatch between points");
}

void Space::check_size(const Point& p) const {
  if (p.kind != kind())
    throw std::invalid_argument("point does not belong to this space");
  if (p.data.size() != point_size())
    throw std::invalid_argument("point has wrong coordinate count for this space");
}

TangentVector Space::log(const Point&, const Point&) const {
  throw GeodesicError("log map is not defined on " + to_string(kind()));
}

Point Space::exp(const Point&, const TangentVector&) const {
  throw GeodesicError("exp map is not defined on " + to_string(kind()));
}

double Space::tangent_dot(const TangentVector&, const TangentVector&) const {
  throw GeodesicError("tangent metric is not defined on " + to_string(kind()));
}

double Space::tangent_norm(const TangentVector& v) const {
  return std::sqrt(std::max(0.0, tangent_dot(v, v)));
}

TangentVector Space::random_unit_tangent(const Point&, Rng&) const {
  throw GeodesicError("tangent sampling is not defined on " + to_string(kind()));
}

Point Space::point_symmetry(const Point& p, const Point& x) const {
  TangentVector v = log(p, x);
  v.components = -v.components;
  return exp(p, v);
}

Point Space::project_to_ball(const Point& center, double r, const Point& x) const {
  if (r < 0.0) throw std::invalid_argument("ball radius must be nonnegative");
  const double d = distance(center, x);
  if (d <= r) return x;
  return interpolate(center, x, r / d);
}

GeometrySpec Space::geometry() const {
  GeometrySpec g;
  g.kappa = curvature_bound();
  g.dimension = 0;
  return g;
}

double geodesic_speed_defect(const Space& space, const Point& x, const Point& y,
                             const std::vector<double>& partition) {
  if (partition.size() < 2) throw std::invalid_argument("partition needs at least two values");
  const double total = space.distance(x, y);
  std::vector<Point> pts;
  pts.reserve(partition.size());
  for (double t : partition) {
    if (t < 0.0 || t > 1.0) throw std::invalid_argument("partition values must lie in [0,1]");
    pts.push_back(space.interpolate(x, y, t));
  }
  double defect = 0.0;
  for (std::size_t i = 0; i + 1 < partition.size(); ++i) {
    const double expected = std::abs(partition[i + 1] - partition[i]) * total;
    const double actual = space.distance(pts[i], pts[i + 1]);
    defect = std::max(defect, std::abs(actual - expected));
  }
  return defect;
}

std::vector<double> uniform_partition(int n) {
  if (n < 2) throw std::invalid_argument("partition needs at least two values");
  std::vector<double> ts(n);
  for (int i = 0; i < n; ++i) ts[i] = static_cast<double>(i) / (n - 1);
  return ts;
}

}  // namespace frechet
