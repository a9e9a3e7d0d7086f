#pragma once

#include <array>
#include <utility>
#include <vector>

#include "frechet/geometry.hpp"

namespace frechet {

/// Weighted edge between two node ids. Edges are canonicalized so that
/// node_a < node_b and locus offsets are measured from node_a.
struct TreeEdge {
  int node_a = 0;
  int node_b = 0;
  double length = 0.0;
};

/// Finite metric tree: connected acyclic graph with positive edge lengths.
/// Node distances are precomputed at construction, so locus distance and
/// geodesic queries are cheap.
class MetricTree {
 public:
  explicit MetricTree(std::vector<TreeEdge> edges);

  int node_count() const { return static_cast<int>(index_of_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const TreeEdge& edge(int e) const { return edges_.at(e); }
  const std::vector<TreeEdge>& edges() const { return edges_; }

  /// Shortest-path distance between nodes (by original node id).
  double node_distance(int a, int b) const;

  /// Node sequence of the unique path between two nodes (inclusive).
  std::vector<int> node_path(int a, int b) const;

  /// Edge index joining two adjacent nodes.
  int edge_between(int a, int b) const;

  bool has_node(int id) const;
  std::vector<int> leaves() const;

 private:
  int dense(int id) const;

  std::vector<TreeEdge> edges_;
  std::vector<int> node_ids_;                 // dense index -> original id
  std::vector<std::pair<int, int>> index_of_; // sorted (id, dense index)
  std::vector<std::vector<std::pair<int, int>>> adjacency_;  // dense -> (dense nbr, edge idx)
  std::vector<std::vector<double>> node_dist_;               // dense x dense
};

/// Point layout on a tree: data = (edge index, offset from the edge's
/// canonical lower node), offset in [0, edge length].
class TreeSpace : public Space {
 public:
  explicit TreeSpace(MetricTree tree) : tree_(std::move(tree)) {}

  SpaceKind kind() const override { return SpaceKind::tree; }
  double curvature_bound() const override { return 0.0; }
  bool smooth() const override { return false; }
  int point_size() const override { return 2; }

  void validate_point(const Point& p) const override;
  double distance(const Point& x, const Point& y) const override;
  Point interpolate(const Point& x, const Point& y, double t) const override;

  const MetricTree& tree() const { return tree_; }

  Point locus(int edge, double offset) const;
  Point node_locus(int node_id) const;

  /// Snaps offsets within 1e-12 * length of a node onto the node and maps
  /// node loci to their smallest incident edge, so equality is well defined.
  Point canonical(const Point& p) const;

 private:
  struct EndpointDistances {
    double to_a = 0.0;
    double to_b = 0.0;
  };
  EndpointDistances endpoint_distances(const Point& p) const;

  MetricTree tree_;
};

/// Star tree with one root (node 0) and three leaves (nodes 1..3) at the
/// given arm lengths, plus the ordered sample list with p copies of each
/// leaf: leaf 1 first, then leaf 2, then leaf 3.
std::pair<MetricTree, std::vector<Point>> build_figure1_tree(
    int p, const std::array<double, 3>& arm_lengths);

}  // namespace frechet
