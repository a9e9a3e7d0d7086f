#pragma once

#include <Eigen/Dense>
#include <limits>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "frechet/rng.hpp"

namespace frechet {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Raised when a geodesic operation is undefined (antipodal sphere points,
/// log/exp on a non-smooth space, out-of-domain inverse trig arguments).
struct GeodesicError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class SpaceKind { euclidean, sphere, hyperbolic, spd, tree };

std::string to_string(SpaceKind kind);
SpaceKind space_kind_from_string(const std::string& name);

/// Model diameter D_kappa of the constant-curvature comparison space:
/// pi/sqrt(kappa) for kappa > 0, +infinity otherwise.
double model_diameter(double kappa);

/// Curvature upper bound and model-space metadata.
struct GeometrySpec {
  double kappa = 0.0;
  int dimension = 0;  // 0 where not applicable (trees)

  double diameter() const { return model_diameter(kappa); }
};

/// Space-tagged coordinate bundle. The owning space defines the layout:
/// euclidean d coords; sphere/hyperbolic d+1 ambient coords; SPD d*d
/// row-major entries; tree (edge index, offset).
struct Point {
  SpaceKind kind = SpaceKind::euclidean;
  Vector data;
};

/// Tangent vector at `base`, components in the same ambient layout as the
/// base point's coordinates.
struct TangentVector {
  Point base;
  Vector components;
};

class Space;

/// Ball-shaped convex domain hypothesis: center, radius and (for kappa > 0)
/// the margin epsilon with radius <= (1/2)(D_kappa/2 - epsilon).
struct ConvexDomainSpec {
  Point center;
  double radius = 0.0;
  double epsilon = 0.0;  // required iff kappa > 0
};

struct DomainValidation {
  bool ok = true;
  std::vector<std::string> violations;
};

/// Checks the convex-domain hypotheses under which the error bounds hold:
/// any radius for kappa <= 0; for kappa > 0 both radius < D_kappa/4 and
/// radius <= (1/2)(D_kappa/2 - epsilon) with 0 < epsilon < D_kappa/2.
DomainValidation validate_domain(const ConvexDomainSpec& spec, const GeometrySpec& geom);

/// Common contract of the five concrete geodesic spaces.
class Space {
 public:
  virtual ~Space() = default;

  virtual SpaceKind kind() const = 0;
  virtual double curvature_bound() const = 0;
  virtual bool smooth() const = 0;
  virtual int point_size() const = 0;  // length of Point::data

  /// Throws std::invalid_argument when the coordinates do not satisfy the
  /// space's membership predicate.
  virtual void validate_point(const Point& p) const = 0;

  virtual double distance(const Point& x, const Point& y) const = 0;

  /// Point at parameter t on the unique constant-speed geodesic x -> y.
  virtual Point interpolate(const Point& x, const Point& y, double t) const = 0;

  virtual TangentVector log(const Point& x, const Point& y) const;
  virtual Point exp(const Point& x, const TangentVector& v) const;
  virtual double tangent_dot(const TangentVector& u, const TangentVector& v) const;
  double tangent_norm(const TangentVector& v) const;

  /// Uniformly distributed unit tangent vector at x (smooth spaces).
  virtual TangentVector random_unit_tangent(const Point& x, Rng& rng) const;

  /// Geodesic reflection through p: exp_p(-log_p(x)).
  Point point_symmetry(const Point& p, const Point& x) const;

  /// Metric projection onto the closed ball B(center, r).
  Point project_to_ball(const Point& center, double r, const Point& x) const;

  GeometrySpec geometry() const;

 protected:
  void check_same_kind(const Point& x, const Point& y) const;
  void check_size(const Point& p) const;
};

/// Max over consecutive partition pairs (s,t) of
/// |d(gamma(s),gamma(t)) - |s-t| d(x,y)|; zero for an exact constant-speed
/// geodesic. `partition` holds parameters in [0,1].
double geodesic_speed_defect(const Space& space, const Point& x, const Point& y,
                             const std::vector<double>& partition);

/// Evenly spaced partition {0, 1/(n-1), ..., 1} used by the property tests.
std::vector<double> uniform_partition(int n);

}  // namespace frechet
