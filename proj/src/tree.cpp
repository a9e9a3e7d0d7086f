#include "frechet/tree.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <deque>

namespace frechet {

namespace {

int lookup(const std::vector<std::pair<int, int>>& index, int id) {
  auto it = std::lower_bound(index.begin(), index.end(), std::make_pair(id, -1));
  if (it == index.end() || it->first != id) return -1;
  return it->second;
}

}  // namespace

MetricTree::MetricTree(std::vector<TreeEdge> edges) : edges_(std::move(edges)) {
  if (edges_.empty()) throw std::invalid_argument("tree needs at least one edge");
  for (TreeEdge& e : edges_) {
    if (!(e.length > 0.0)) throw std::invalid_argument("tree edge lengths must be positive");
    if (e.node_a == e.node_b) throw std::invalid_argument("tree edge endpoints must differ");
    if (e.node_a > e.node_b) std::swap(e.node_a, e.node_b);
  }
  for (const TreeEdge& e : edges_) {
    index_of_.emplace_back(e.node_a, 0);
    index_of_.emplace_back(e.node_b, 0);
  }
  std::sort(index_of_.begin(), index_of_.end());
  index_of_.erase(std::unique(index_of_.begin(), index_of_.end(),
                              [](auto& a, auto& b) { return a.first == b.first; }),
                  index_of_.end());
  for (std::size_t i = 0; i < index_of_.size(); ++i) {
    index_of_[i].second = static_cast<int>(i);
    node_ids_.push_back(index_of_[i].first);
  }

  const int n = node_count();
  if (static_cast<int>(edges_.size()) != n - 1)
    throw std::invalid_argument("tree must have exactly (nodes - 1) edges");

  adjacency_.assign(n, {});
  for (int e = 0; e < edge_count(); ++e) {
    const int a = dense(edges_[e].node_a);
    const int b = dense(edges_[e].node_b);
    adjacency_[a].emplace_back(b, e);
    adjacency_[b].emplace_back(a, e);
  }

  // BFS from every node; also detects disconnection (a disconnected graph
  // with n-1 edges necessarily contains a cycle elsewhere).
  node_dist_.assign(n, std::vector<double>(n, -1.0));
  for (int s = 0; s < n; ++s) {
    auto& dist = node_dist_[s];
    dist[s] = 0.0;
    std::deque<int> queue{s};
    while (!queue.empty()) {
      const int u = queue.front();
      queue.pop_front();
      for (const auto& [v, e] : adjacency_[u]) {
        if (dist[v] < 0.0) {
          dist[v] = dist[u] + edges_[e].length;
          queue.push_back(v);
        }
      }
    }
    for (double d : dist)
      if (d < 0.0) throw std::invalid_argument("tree edges do not form a connected graph");
  }
}

int MetricTree::dense(int id) const {
  const int i = lookup(index_of_, id);
  if (i < 0) throw std::invalid_argument("unknown tree node id");
  return i;
}

bool MetricTree::has_node(int id) const { return lookup(index_of_, id) >= 0; }

double MetricTree::node_distance(int a, int b) const { return node_dist_[dense(a)][dense(b)]; }

std::vector<int> MetricTree::node_path(int a, int b) const {
  const int s = dense(a), t = dense(b);
  std::vector<int> parent(node_count(), -1);
  std::deque<int> queue{s};
  parent[s] = s;
  while (!queue.empty()) {
    const int u = queue.front();
    queue.pop_front();
    if (u == t) break;
    for (const auto& [v, e] : adjacency_[u]) {
      if (parent[v] < 0) {
        parent[v] = u;
        queue.push_back(v);
      }
    }
  }
  std::vector<int> path;
  for (int u = t; u != s; u = parent[u]) path.push_back(node_ids_[u]);
  path.push_back(node_ids_[s]);
  std::reverse(path.begin(), path.end());
  return path;
}

int MetricTree::edge_between(int a, int b) const {
  const int da = dense(a), db = dense(b);
  for (const auto& [v, e] : adjacency_[da])
    if (v == db) return e;
  throw std::invalid_argument("nodes are not adjacent in the tree");
}

std::vector<int> MetricTree::leaves() const {
  std::vector<int> out;
  for (int i = 0; i < node_count(); ++i)
    if (adjacency_[i].size() == 1) out.push_back(node_ids_[i]);
  return out;
}

void TreeSpace::validate_point(const Point& p) const {
  check_size(p);
  const double edge_real = p.data[0];
  const int e = static_cast<int>(edge_real);
  if (edge_real != static_cast<double>(e) || e < 0 || e >= tree_.edge_count())
    throw std::invalid_argument("tree locus has invalid edge index");
  const double offset = p.data[1];
  if (!(offset >= 0.0) || offset > tree_.edge(e).length)
    throw std::invalid_argument("tree locus offset outside edge bounds");
}

Point TreeSpace::locus(int edge, double offset) const {
  Point p;
  p.kind = SpaceKind::tree;
  p.data = Vector(2);
  p.data << static_cast<double>(edge), offset;
  validate_point(p);
  return p;
}

Point TreeSpace::node_locus(int node_id) const {
  for (int e = 0; e < tree_.edge_count(); ++e) {
    if (tree_.edge(e).node_a == node_id) return locus(e, 0.0);
    if (tree_.edge(e).node_b == node_id) return locus(e, tree_.edge(e).length);
  }
  throw std::invalid_argument("unknown tree node id");
}

Point TreeSpace::canonical(const Point& p) const {
  validate_point(p);
  const int e = static_cast<int>(p.data[0]);
  const TreeEdge& edge = tree_.edge(e);
  const double snap = 1e-12 * edge.length;
  if (p.data[1] <= snap) return node_locus(edge.node_a);
  if (p.data[1] >= edge.length - snap) return node_locus(edge.node_b);
  return p;
}

TreeSpace::EndpointDistances TreeSpace::endpoint_distances(const Point& p) const {
  const int e = static_cast<int>(p.data[0]);
  return {p.data[1], tree_.edge(e).length - p.data[1]};
}

double TreeSpace::distance(const Point& x, const Point& y) const {
  check_same_kind(x, y);
  const int ex = static_cast<int>(x.data[0]);
  const int ey = static_cast<int>(y.data[0]);
  if (ex == ey) return std::abs(x.data[1] - y.data[1]);

  const auto dx = endpoint_distances(x);
  const auto dy = endpoint_distances(y);
  const TreeEdge& ax = tree_.edge(ex);
  const TreeEdge& ay = tree_.edge(ey);
  double best = kInfinity;
  const std::array<std::pair<int, double>, 2> ends_x{{{ax.node_a, dx.to_a}, {ax.node_b, dx.to_b}}};
  const std::array<std::pair<int, double>, 2> ends_y{{{ay.node_a, dy.to_a}, {ay.node_b, dy.to_b}}};
  for (const auto& [p, op] : ends_x)
    for (const auto& [q, oq] : ends_y)
      best = std::min(best, op + tree_.node_distance(p, q) + oq);
  return best;
}

Point TreeSpace::interpolate(const Point& x, const Point& y, double t) const {
  check_same_kind(x, y);
  if (t < 0.0 || t > 1.0) throw std::invalid_argument("interpolation parameter outside [0,1]");
  const int ex = static_cast<int>(x.data[0]);
  const int ey = static_cast<int>(y.data[0]);
  if (ex == ey) {
    Point out = x;
    out.data[1] = x.data[1] + t * (y.data[1] - x.data[1]);
    return out;
  }

  const auto dx = endpoint_distances(x);
  const auto dy = endpoint_distances(y);
  const TreeEdge& ax = tree_.edge(ex);
  const TreeEdge& ay = tree_.edge(ey);

  // Pick the exit endpoint of x's edge and the entry endpoint of y's edge
  // realizing the unique path.
  int exit_node = ax.node_a, entry_node = ay.node_a;
  double exit_off = dx.to_a, entry_off = dy.to_a, best = kInfinity;
  const std::array<std::pair<int, double>, 2> ends_x{{{ax.node_a, dx.to_a}, {ax.node_b, dx.to_b}}};
  const std::array<std::pair<int, double>, 2> ends_y{{{ay.node_a, dy.to_a}, {ay.node_b, dy.to_b}}};
  for (const auto& [p, op] : ends_x) {
    for (const auto& [q, oq] : ends_y) {
      const double total = op + tree_.node_distance(p, q) + oq;
      if (total < best) {
        best = total;
        exit_node = p;
        exit_off = op;
        entry_node = q;
        entry_off = oq;
      }
    }
  }

  double s = t * best;
  // Still on x's edge.
  if (s <= exit_off) {
    Point out = x;
    const double direction = (exit_node == ax.node_a) ? -1.0 : 1.0;
    out.data[1] = x.data[1] + direction * s;
    return out;
  }
  s -= exit_off;

  // Walk the node path exit -> entry.
  const std::vector<int> path = tree_.node_path(exit_node, entry_node);
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    const int e = tree_.edge_between(path[i], path[i + 1]);
    const TreeEdge& edge = tree_.edge(e);
    if (s <= edge.length) {
      const double offset = (path[i] == edge.node_a) ? s : edge.length - s;
      Point out;
      out.kind = SpaceKind::tree;
      out.data = Vector(2);
      out.data << static_cast<double>(e), offset;
      return out;
    }
    s -= edge.length;
  }

  // Into y's edge, moving from the entry endpoint toward y.
  s = std::min(s, tree_.edge(ey).length);
  Point out = y;
  out.data[1] = (entry_node == ay.node_a) ? s : ay.length - s;
  return out;
}

std::pair<MetricTree, std::vector<Point>> build_figure1_tree(
    int p, const std::array<double, 3>& arm_lengths) {
  if (p < 1) throw std::invalid_argument("figure-1 tree needs p >= 1");
  std::vector<TreeEdge> edges;
  for (int i = 0; i < 3; ++i) {
    if (!(arm_lengths[i] > 0.0)) throw std::invalid_argument("arm lengths must be positive");
    edges.push_back({0, i + 1, arm_lengths[i]});
  }
  MetricTree tree(std::move(edges));
  TreeSpace space(tree);
  std::vector<Point> points;
  points.reserve(3 * static_cast<std::size_t>(p));
  for (int leaf = 0; leaf < 3; ++leaf)
    for (int i = 0; i < p; ++i) points.push_back(space.locus(leaf, arm_lengths[leaf]));
  return {std::move(tree), std::move(points)};
}

}  // namespace frechet
