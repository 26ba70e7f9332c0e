#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace gefrfe {

/// Undirected edge with `u < v`.
struct Edge {
  int u = 0;
  int v = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge&, const Edge&) = default;
};

/// Simple unweighted undirected graph on nodes 0..N-1.
///
/// The constructor rejects self-loops, duplicate pairs (in either orientation)
/// and out-of-range endpoints. Edges are stored sorted with `u < v`, so two
/// graphs with the same edge set compare equal regardless of input order.
class Graph {
 public:
  Graph(int node_count, const std::vector<std::pair<int, int>>& edges);

  int node_count() const { return node_count_; }
  const std::vector<Edge>& edges() const { return edges_; }
  std::size_t edge_count() const { return edges_.size(); }

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  int node_count_;
  std::vector<Edge> edges_;
};

Eigen::MatrixXd adjacency_matrix(const Graph& g);

/// Diagonal matrix of column sums of `adjacency`.
Eigen::MatrixXd degree_matrix(const Eigen::MatrixXd& adjacency);

/// L = D - A.
Eigen::MatrixXd laplacian(const Graph& g);

/// Number of connected components (union-find).
int connected_components(const Graph& g);

/// Graphs with one class label each. Node attributes are carried along for
/// completeness but the embedding only uses structure.
struct LabeledDataset {
  std::string name;
  std::vector<Graph> graphs;
  std::vector<int> labels;
  /// Optional mapping from class id to the label text found in the source files.
  std::vector<std::string> class_names;
  /// Optional per-graph node attribute rows (N x d); empty when absent.
  std::vector<Eigen::MatrixXd> node_attributes;

  std::size_t size() const { return graphs.size(); }
  int class_count() const;
  double mean_vertices() const;
  double mean_edges() const;
  int max_nodes() const;

  /// Throws DataError when labels and graphs disagree in length.
  void validate() const;
};

}  // namespace gefrfe
