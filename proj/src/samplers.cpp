#include "frechet/samplers.hpp"

#include <cmath>
#include <sstream>

#include "frechet/spaces.hpp"

namespace frechet {

std::optional<double> Sampler::subgaussian_k2() const {
  const double r = support_radius();
  if (std::isfinite(r)) return 4.0 * r * r;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// UniformCapSampler

namespace {

constexpr int kGridCells = 4096;
constexpr double kBisectTol = 1e-12;

int manifold_dimension(const Space& space) {
  switch (space.kind()) {
    case SpaceKind::euclidean: return static_cast<const EuclideanSpace&>(space).dim();
    case SpaceKind::sphere: return static_cast<const SphereSpace&>(space).dim();
    case SpaceKind::hyperbolic: return static_cast<const HyperbolicSpace&>(space).dim();
    default:
      throw std::invalid_argument(
          "uniform cap sampling is defined for the constant-curvature spaces only");
  }
}

/// 16-point Gauss-Legendre nodes/weights on [-1, 1].
constexpr double kGlNode[8] = {0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
                               0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
                               0.9445750230732326, 0.9894009349916499};
constexpr double kGlWeight[8] = {0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
                                 0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};

template <typename F>
double gauss_legendre(F&& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (int i = 0; i < 8; ++i) {
    sum += kGlWeight[i] * (f(mid + half * kGlNode[i]) + f(mid - half * kGlNode[i]));
  }
  return half * sum;
}

}  // namespace

UniformCapSampler::UniformCapSampler(std::shared_ptr<const Space> space, Point center,
                                     double radius)
    : space_(std::move(space)), center_(std::move(center)), radius_(radius) {
  manifold_dim_ = manifold_dimension(*space_);
  space_->validate_point(center_);
  if (!(radius_ >= 0.0)) throw std::invalid_argument("cap radius must be nonnegative");
  const double kappa = space_->curvature_bound();
  if (kappa > 0.0 && !(radius_ < model_diameter(kappa) / 2.0))
    throw std::invalid_argument("cap radius too large for the sphere");

  grid_cdf_.assign(kGridCells + 1, 0.0);
  grid_step_ = radius_ > 0.0 ? radius_ / kGridCells : 0.0;
  for (int i = 1; i <= kGridCells; ++i) {
    const double lo = (i - 1) * grid_step_;
    const double hi = i * grid_step_;
    grid_cdf_[i] = grid_cdf_[i - 1] + gauss_legendre([this](double t) { return density(t); }, lo, hi);
  }
}

double UniformCapSampler::density(double t) const {
  const double kappa = space_->curvature_bound();
  double s;
  if (kappa > 0.0) {
    const double rk = std::sqrt(kappa);
    s = std::sin(rk * t) / rk;
  } else if (kappa < 0.0) {
    const double rk = std::sqrt(-kappa);
    s = std::sinh(rk * t) / rk;
  } else {
    s = t;
  }
  return std::pow(s, manifold_dim_ - 1);
}

double UniformCapSampler::unnormalized_cdf(double t) const {
  if (t <= 0.0) return 0.0;
  t = std::min(t, radius_);
  const int cell = std::min(kGridCells - 1, static_cast<int>(t / grid_step_));
  const double lo = cell * grid_step_;
  return grid_cdf_[cell] + gauss_legendre([this](double u) { return density(u); }, lo, t);
}

double UniformCapSampler::radial_cdf(double t) const {
  const double total = grid_cdf_.back();
  if (total <= 0.0) return t >= radius_ ? 1.0 : 0.0;
  return unnormalized_cdf(t) / total;
}

double UniformCapSampler::sample_radius(Rng& rng) const {
  if (radius_ == 0.0) return 0.0;
  const double target = rng.uniform() * grid_cdf_.back();
  double lo = 0.0, hi = radius_;
  while (hi - lo > kBisectTol * std::max(1.0, radius_)) {
    const double mid = 0.5 * (lo + hi);
    if (unnormalized_cdf(mid) < target)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

Point UniformCapSampler::sample(Rng& rng) const {
  TangentVector dir = space_->random_unit_tangent(center_, rng);
  const double t = sample_radius(rng);
  if (t == 0.0) return center_;
  dir.components *= t;
  return space_->exp(center_, dir);
}

std::string UniformCapSampler::describe() const {
  std::ostringstream os;
  os << "uniform-cap(r=" << radius_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// TwoPointSampler

TwoPointSampler::TwoPointSampler(std::shared_ptr<const Space> space, Point center,
                                 TangentVector direction, double radius)
    : space_(std::move(space)), center_(std::move(center)), radius_(radius) {
  space_->validate_point(center_);
  if (!(radius_ >= 0.0)) throw std::invalid_argument("two-point radius must be nonnegative");
  const double norm = space_->tangent_norm(direction);
  if (!(norm > 0.0)) throw std::invalid_argument("two-point direction must be nonzero");
  TangentVector unit = direction;
  unit.components /= norm;
  TangentVector v = unit;
  v.components *= radius_;
  plus_ = space_->exp(center_, v);
  v.components = -v.components;
  minus_ = space_->exp(center_, v);
}

Point TwoPointSampler::sample(Rng& rng) const {
  return (rng() & 1ULL) ? plus_ : minus_;
}

std::string TwoPointSampler::describe() const {
  std::ostringstream os;
  os << "two-point(r=" << radius_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------
// TreeLeavesSampler

TreeLeavesSampler::TreeLeavesSampler(std::shared_ptr<const TreeSpace> space,
                                     std::vector<int> leaves, std::vector<double> weights,
                                     Point center)
    : space_(std::move(space)), weights_(std::move(weights)), center_(std::move(center)) {
  if (leaves.empty() || leaves.size() != weights_.size())
    throw std::invalid_argument("leaf and weight lists must be nonempty and equal-sized");
  space_->validate_point(center_);
  double total = 0.0;
  for (double w : weights_) {
    if (w < 0.0) throw std::invalid_argument("leaf weights must be nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw std::invalid_argument("leaf weights must not all vanish");
  double acc = 0.0;
  for (std::size_t i = 0; i < leaves.size(); ++i) {
    loci_.push_back(space_->node_locus(leaves[i]));
    acc += weights_[i] / total;
    cumulative_.push_back(acc);
  }
  cumulative_.back() = 1.0;
}

Point TreeLeavesSampler::sample(Rng& rng) const {
  // Zero-weight leaves repeat the previous cumulative value, so they can
  // never be the first strict match; they are drawn with probability zero.
  const double u = rng.uniform();
  for (std::size_t i = 0; i < cumulative_.size(); ++i)
    if (u < cumulative_[i]) return loci_[i];
  return loci_.back();
}

double TreeLeavesSampler::support_radius() const {
  double r = 0.0;
  for (const Point& p : loci_) r = std::max(r, space_->distance(center_, p));
  return r;
}

std::optional<double> TreeLeavesSampler::total_variance() const {
  double total = 0.0, mass = 0.0;
  for (double w : weights_) mass += w;
  for (std::size_t i = 0; i < loci_.size(); ++i) {
    const double d = space_->distance(center_, loci_[i]);
    total += weights_[i] / mass * d * d;
  }
  return total;
}

std::string TreeLeavesSampler::describe() const { return "tree-leaves"; }

// ---------------------------------------------------------------------------
// GaussianSampler

GaussianSampler::GaussianSampler(std::shared_ptr<const Space> space, Point mean, double sigma)
    : space_(std::move(space)), mean_(std::move(mean)), sigma_(sigma) {
  if (space_->kind() != SpaceKind::euclidean)
    throw std::invalid_argument("gaussian sampler is Euclidean-only");
  space_->validate_point(mean_);
  if (!(sigma_ >= 0.0)) throw std::invalid_argument("sigma must be nonnegative");
}

Point GaussianSampler::sample(Rng& rng) const {
  Point p = mean_;
  for (Eigen::Index i = 0; i < p.data.size(); ++i) p.data[i] += sigma_ * rng.normal();
  return p;
}

std::optional<double> GaussianSampler::total_variance() const {
  return sigma_ * sigma_ * static_cast<double>(mean_.data.size());
}

std::string GaussianSampler::describe() const {
  std::ostringstream os;
  os << "gaussian(sigma=" << sigma_ << ")";
  return os.str();
}

// ---------------------------------------------------------------------------

VarianceEstimate estimate_total_variance(const Space& space, const Sampler& sampler,
                                         const Point& b_star, long n_mc, Rng& rng) {
  if (n_mc < 1) throw std::invalid_argument("variance estimation needs n_mc >= 1");
  double sum = 0.0, sum_sq = 0.0;
  for (long i = 0; i < n_mc; ++i) {
    const double d = space.distance(sampler.sample(rng), b_star);
    sum += d * d;
    sum_sq += d * d * d * d;
  }
  const double mean = sum / static_cast<double>(n_mc);
  const double var = std::max(0.0, sum_sq / static_cast<double>(n_mc) - mean * mean);
  VarianceEstimate est;
  est.sigma2 = mean;
  est.stderr_ = n_mc > 1 ? std::sqrt(var / static_cast<double>(n_mc)) : 0.0;
  return est;
}

}  // namespace frechet
