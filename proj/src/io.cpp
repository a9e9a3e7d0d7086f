#include "frechet/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "frechet/bounds.hpp"
#include "frechet/spaces.hpp"

namespace frechet {

namespace {

using nlohmann::json;

std::vector<std::string> split_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream ss(line);
  while (std::getline(ss, cell, ',')) cells.push_back(cell);
  return cells;
}

bool parse_double(const std::string& text, double& out) {
  try {
    std::size_t pos = 0;
    out = std::stod(text, &pos);
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
    return pos == text.size();
  } catch (const std::exception&) {
    return false;
  }
}

[[noreturn]] void row_error(const std::string& path, std::size_t line, const std::string& what) {
  std::ostringstream os;
  os << path << ":" << line << ": " << what;
  throw IoError(os.str());
}

}  // namespace

std::string format_value(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::vector<Point> read_points_csv(const Space& space, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open point file: " + path);
  std::vector<Point> points;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> cells = split_csv_row(line);
    if (static_cast<int>(cells.size()) != space.point_size())
      row_error(path, lineno,
                "expected " + std::to_string(space.point_size()) + " columns, found " +
                    std::to_string(cells.size()));
    Point p;
    p.kind = space.kind();
    p.data = Vector(space.point_size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
      double v;
      if (!parse_double(cells[c], v)) row_error(path, lineno, "cannot parse '" + cells[c] + "'");
      p.data[static_cast<Eigen::Index>(c)] = v;
    }
    try {
      space.validate_point(p);
    } catch (const std::exception& e) {
      row_error(path, lineno, e.what());
    }
    points.push_back(std::move(p));
  }
  if (points.empty()) throw IoError("point file is empty: " + path);
  return points;
}

void write_points_csv(const Space& space, const std::vector<Point>& points,
                      const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  for (const Point& p : points) {
    if (p.kind != space.kind()) throw IoError("point/space kind mismatch on write");
    for (Eigen::Index i = 0; i < p.data.size(); ++i) {
      if (i) out << ',';
      out << format_value(p.data[i]);
    }
    out << '\n';
  }
}

MetricTree read_tree_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open tree file: " + path);
  std::vector<TreeEdge> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    const std::vector<std::string> cells = split_csv_row(line);
    if (cells.size() != 3) row_error(path, lineno, "expected node_a,node_b,length");
    double a, b, len;
    if (!parse_double(cells[0], a) || !parse_double(cells[1], b) || !parse_double(cells[2], len)) {
      if (lineno == 1) continue;  // header row
      row_error(path, lineno, "cannot parse edge row");
    } else {
      TreeEdge edge;
      edge.node_a = static_cast<int>(a);
      edge.node_b = static_cast<int>(b);
      edge.length = len;
      if (a != edge.node_a || b != edge.node_b)
        row_error(path, lineno, "node ids must be integers");
      edges.push_back(edge);
    }
  }
  try {
    return MetricTree(std::move(edges));
  } catch (const std::exception& e) {
    throw IoError(path + ": " + e.what());
  }
}

void write_tree_csv(const MetricTree& tree, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << "node_a,node_b,length\n";
  for (const TreeEdge& e : tree.edges())
    out << e.node_a << ',' << e.node_b << ',' << format_value(e.length) << '\n';
}

std::string results_csv_string(const std::vector<SummaryRow>& rows) {
  std::ostringstream out;
  out << "experiment_id,space,kappa,epsilon,estimator,n,replicates,mse,mse_stderr,"
         "q50,q90,q99,exp_bound,tail_bound,delta,exceedance,flags,seed\n";
  for (const SummaryRow& r : rows) {
    out << r.experiment_id << ',' << r.space << ',' << format_value(r.kappa) << ','
        << format_value(r.epsilon) << ',' << r.estimator << ',' << r.n << ',' << r.replicates
        << ',' << format_value(r.mse) << ',' << format_value(r.mse_stderr) << ','
        << format_value(r.q50) << ',' << format_value(r.q90) << ',' << format_value(r.q99) << ','
        << format_value(r.exp_bound) << ',' << format_value(r.tail_bound) << ','
        << format_value(r.delta) << ',' << format_value(r.exceedance) << ',' << r.flags << ','
        << r.seed << '\n';
  }
  return out.str();
}

void write_results_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open output file: " + path);
  out << results_csv_string(rows);
}

namespace {

[[noreturn]] void schema_error(const std::string& path, const std::string& what) {
  throw IoError("config field '" + path + "': " + what);
}

const json& require_field(const json& j, const char* name, const std::string& path) {
  if (!j.contains(name)) schema_error(path + "." + name, "missing");
  return j.at(name);
}

double as_number(const json& j, const std::string& path) {
  if (!j.is_number()) schema_error(path, "expected a number");
  return j.get<double>();
}

long as_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) schema_error(path, "expected an integer");
  return j.get<long>();
}

std::string as_string(const json& j, const std::string& path) {
  if (!j.is_string()) schema_error(path, "expected a string");
  return j.get<std::string>();
}

Vector as_vector(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema_error(path, "expected a nonempty array of numbers");
  Vector v(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = as_number(j[i], path);
  return v;
}

std::shared_ptr<Space> parse_space(const json& j, const std::string& path) {
  const std::string kind = as_string(require_field(j, "kind", path), path + ".kind");
  if (kind == "tree") {
    std::vector<TreeEdge> edges;
    const json& je = require_field(j, "edges", path);
    if (!je.is_array() || je.empty()) schema_error(path + ".edges", "expected [[a,b,len],...]");
    for (const json& e : je) {
      if (!e.is_array() || e.size() != 3) schema_error(path + ".edges", "expected [a,b,len]");
      TreeEdge edge;
      edge.node_a = static_cast<int>(as_integer(e[0], path + ".edges"));
      edge.node_b = static_cast<int>(as_integer(e[1], path + ".edges"));
      edge.length = as_number(e[2], path + ".edges");
      edges.push_back(edge);
    }
    return std::make_shared<TreeSpace>(MetricTree(std::move(edges)));
  }
  const SpaceKind sk = space_kind_from_string(kind);
  double kappa = 0.0;
  if (sk == SpaceKind::sphere || sk == SpaceKind::hyperbolic)
    kappa = as_number(require_field(j, "kappa", path), path + ".kappa");
  const int dim = static_cast<int>(as_integer(require_field(j, "dim", path), path + ".dim"));
  return make_space(sk, kappa, dim);
}

Point parse_point(const Space& space, const json& j, const std::string& path) {
  Point p;
  p.kind = space.kind();
  p.data = as_vector(j, path);
  try {
    space.validate_point(p);
  } catch (const std::exception& e) {
    schema_error(path, e.what());
  }
  return p;
}

std::shared_ptr<Sampler> parse_sampler(std::shared_ptr<Space> space, const json& j,
                                       const std::string& path) {
  const std::string kind = as_string(require_field(j, "kind", path), path + ".kind");
  if (kind == "gaussian") {
    Point mean = parse_point(*space, require_field(j, "center", path), path + ".center");
    const double sigma = as_number(require_field(j, "sigma", path), path + ".sigma");
    return std::make_shared<GaussianSampler>(space, std::move(mean), sigma);
  }
  if (kind == "uniform-cap") {
    Point center = parse_point(*space, require_field(j, "center", path), path + ".center");
    const double radius = as_number(require_field(j, "radius", path), path + ".radius");
    return std::make_shared<UniformCapSampler>(space, std::move(center), radius);
  }
  if (kind == "two-point") {
    Point center = parse_point(*space, require_field(j, "center", path), path + ".center");
    const double radius = as_number(require_field(j, "radius", path), path + ".radius");
    TangentVector dir;
    dir.base = center;
    dir.components = as_vector(require_field(j, "direction", path), path + ".direction");
    if (dir.components.size() != center.data.size())
      schema_error(path + ".direction", "wrong component count");
    return std::make_shared<TwoPointSampler>(space, std::move(center), std::move(dir), radius);
  }
  if (kind == "tree-leaves") {
    auto tree_space = std::dynamic_pointer_cast<TreeSpace>(space);
    if (!tree_space) schema_error(path, "tree-leaves sampler needs a tree space");
    std::vector<int> leaves;
    for (const json& v : require_field(j, "leaves", path))
      leaves.push_back(static_cast<int>(as_integer(v, path + ".leaves")));
    std::vector<double> weights;
    for (const json& v : require_field(j, "weights", path))
      weights.push_back(as_number(v, path + ".weights"));
    const int center_node = static_cast<int>(
        as_integer(require_field(j, "center_node", path), path + ".center_node"));
    return std::make_shared<TreeLeavesSampler>(tree_space, std::move(leaves), std::move(weights),
                                               tree_space->node_locus(center_node));
  }
  if (kind == "symmetrized") {
    Point center = parse_point(*space, require_field(j, "center", path), path + ".center");
    std::shared_ptr<Sampler> base =
        parse_sampler(space, require_field(j, "base", path), path + ".base");
    return symmetrize_sampler(space, std::move(center), std::move(base));
  }
  schema_error(path + ".kind", "unknown sampler kind '" + kind + "'");
}

}  // namespace

ExperimentConfig parse_experiment_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig config;
  if (j.contains("experiment_id"))
    config.experiment_id = as_string(j["experiment_id"], "experiment_id");

  const bool has_points = j.contains("points");
  if (has_points) {
    const json& jp = j["points"];
    const std::string kind = as_string(require_field(jp, "kind", "points"), "points.kind");
    if (kind == "figure1") {
      const int p = static_cast<int>(as_integer(require_field(jp, "p", "points"), "points.p"));
      std::array<double, 3> arms{1.0, 1.0, 1.0};
      if (jp.contains("arms")) {
        const Vector v = as_vector(jp["arms"], "points.arms");
        if (v.size() != 3) schema_error("points.arms", "expected three arm lengths");
        arms = {v[0], v[1], v[2]};
      }
      auto [tree, pts] = build_figure1_tree(p, arms);
      config.space = std::make_shared<TreeSpace>(std::move(tree));
      config.fixed_points = std::move(pts);
    } else if (kind == "file") {
      config.space = parse_space(require_field(j, "space", ""), "space");
      config.fixed_points = read_points_csv(
          *config.space, as_string(require_field(jp, "path", "points"), "points.path"));
    } else {
      schema_error("points.kind", "unknown kind '" + kind + "'");
    }
  } else {
    config.space = parse_space(require_field(j, "space", ""), "space");
    config.sampler =
        parse_sampler(config.space, require_field(j, "sampler", ""), "sampler");
  }

  config.kappa = config.space->curvature_bound();
  if (j.contains("domain")) {
    const json& jd = j["domain"];
    if (jd.contains("epsilon")) config.epsilon = as_number(jd["epsilon"], "domain.epsilon");
    if (jd.contains("radius")) config.domain_radius = as_number(jd["radius"], "domain.radius");
  }

  const json& je = require_field(j, "estimator", "");
  const std::string est = as_string(require_field(je, "kind", "estimator"), "estimator.kind");
  if (est == "empirical") {
    config.estimator = EstimatorKind::empirical;
  } else if (est == "iterated") {
    config.estimator = EstimatorKind::iterated;
  } else if (est == "parallel") {
    config.estimator = EstimatorKind::parallel;
    config.parallel_batches =
        as_integer(require_field(je, "batches", "estimator"), "estimator.batches");
  } else if (est == "stochastic-approx") {
    config.estimator = EstimatorKind::stochastic_approx;
    config.approx_eps = as_number(require_field(je, "eps", "estimator"), "estimator.eps");
    config.approx_delta = as_number(require_field(je, "delta", "estimator"), "estimator.delta");
    config.approx_budget = budget_kind_from_string(
        je.contains("budget") ? as_string(je["budget"], "estimator.budget") : "hoeffding");
  } else {
    schema_error("estimator.kind", "unknown kind '" + est + "'");
  }
  if (je.contains("method"))
    config.method = solve_method_from_string(as_string(je["method"], "estimator.method"));

  if (j.contains("schedule")) {
    const std::string kind =
        as_string(require_field(j["schedule"], "kind", "schedule"), "schedule.kind");
    if (kind == "harmonic") {
      config.schedule = StepSchedule::harmonic();
    } else if (kind == "cat-kappa") {
      if (!(config.kappa > 0.0) || !config.epsilon)
        schema_error("schedule", "cat-kappa needs kappa > 0 and domain.epsilon");
      config.schedule = StepSchedule::positive_curvature(
          bounds::alpha_constant(config.kappa, *config.epsilon));
    } else {
      schema_error("schedule.kind", "unknown kind '" + kind + "'");
    }
  }

  const json& jn = require_field(j, "n_grid", "");
  if (!jn.is_array() || jn.empty()) schema_error("n_grid", "expected a nonempty ascending array");
  for (const json& v : jn) config.n_grid.push_back(as_integer(v, "n_grid"));
  if (!std::is_sorted(config.n_grid.begin(), config.n_grid.end()))
    schema_error("n_grid", "must be ascending");

  config.replicates = as_integer(require_field(j, "replicates", ""), "replicates");
  if (config.replicates < 1) schema_error("replicates", "must be >= 1");
  if (j.contains("seed"))
    config.seed = static_cast<std::uint64_t>(as_integer(j["seed"], "seed"));

  if (j.contains("delta")) config.delta = as_number(j["delta"], "delta");
  if (j.contains("sigma2_mc_draws"))
    config.sigma2_mc_draws = as_integer(j["sigma2_mc_draws"], "sigma2_mc_draws");
  if (j.contains("solver")) {
    const json& js = j["solver"];
    if (js.contains("tol")) config.solver.tol = as_number(js["tol"], "solver.tol");
    if (js.contains("max_rounds"))
      config.solver.max_rounds = as_integer(js["max_rounds"], "solver.max_rounds");
    if (js.contains("gradient_step"))
      config.solver.gradient_step = as_number(js["gradient_step"], "solver.gradient_step");
  }

  if (j.contains("tail")) {
    const std::string tail = as_string(j["tail"], "tail");
    if (tail == "none") config.tail = TailBoundKind::none;
    else if (tail == "subgaussian") config.tail = TailBoundKind::subgaussian;
    else if (tail == "hoeffding") config.tail = TailBoundKind::hoeffding;
    else if (tail == "bernstein") config.tail = TailBoundKind::bernstein;
    else if (tail == "iterated-subgaussian") config.tail = TailBoundKind::iterated_subgaussian;
    else if (tail == "iterated-hoeffding") config.tail = TailBoundKind::iterated_hoeffding;
    else if (tail == "iterated-bernstein") config.tail = TailBoundKind::iterated_bernstein;
    else if (tail == "parallel") config.tail = TailBoundKind::parallel;
    else if (tail == "pac") config.tail = TailBoundKind::pac;
    else schema_error("tail", "unknown tail bound '" + tail + "'");
  }

  if (j.contains("checks")) {
    const json& jc = j["checks"];
    if (jc.contains("expectation_bound"))
      config.check_expectation_bound = jc["expectation_bound"].get<bool>();
    if (jc.contains("tail_coverage")) config.check_tail_coverage = jc["tail_coverage"].get<bool>();
    if (jc.contains("rate_slope")) {
      const Vector w = as_vector(jc["rate_slope"], "checks.rate_slope");
      if (w.size() != 2) schema_error("checks.rate_slope", "expected [low, high]");
      config.slope_window = std::array<double, 2>{w[0], w[1]};
    }
  }
  return config;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_experiment_config(buffer.str());
}

}  // namespace frechet
