#include "gefrfe/graph.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <string>

#include "gefrfe/errors.hpp"

namespace gefrfe {

Graph::Graph(int node_count, const std::vector<std::pair<int, int>>& edges) : node_count_(node_count) {
  if (node_count <= 0) {
    throw DataError("graph must have at least one node, got " + std::to_string(node_count));
  }
  edges_.reserve(edges.size());
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= node_count || b >= node_count) {
      throw DataError("edge {" + std::to_string(a) + "," + std::to_string(b) + "} out of range for " +
                      std::to_string(node_count) + " nodes");
    }
    if (a == b) {
      throw DataError("self-loop at node " + std::to_string(a));
    }
    edges_.push_back({std::min(a, b), std::max(a, b)});
  }
  std::sort(edges_.begin(), edges_.end());
  auto dup = std::adjacent_find(edges_.begin(), edges_.end());
  if (dup != edges_.end()) {
    throw DataError("duplicate edge {" + std::to_string(dup->u) + "," + std::to_string(dup->v) + "}");
  }
}

Eigen::MatrixXd adjacency_matrix(const Graph& g) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(g.node_count(), g.node_count());
  for (const Edge& e : g.edges()) {
    a(e.u, e.v) = 1.0;
    a(e.v, e.u) = 1.0;
  }
  return a;
}

Eigen::MatrixXd degree_matrix(const Eigen::MatrixXd& adjacency) {
  Eigen::VectorXd col_sums = adjacency.colwise().sum().transpose();
  return col_sums.asDiagonal();
}

Eigen::MatrixXd laplacian(const Graph& g) {
  Eigen::MatrixXd a = adjacency_matrix(g);
  return degree_matrix(a) - a;
}

int connected_components(const Graph& g) {
  std::vector<int> parent(static_cast<std::size_t>(g.node_count()));
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  int components = g.node_count();
  for (const Edge& e : g.edges()) {
    int ru = find(e.u);
    int rv = find(e.v);
    if (ru != rv) {
      parent[ru] = rv;
      --components;
    }
  }
  return components;
}

int LabeledDataset::class_count() const {
  std::set<int> distinct(labels.begin(), labels.end());
  return static_cast<int>(distinct.size());
}

double LabeledDataset::mean_vertices() const {
  if (graphs.empty()) return 0.0;
  double total = 0.0;
  for (const Graph& g : graphs) total += g.node_count();
  return total / static_cast<double>(graphs.size());
}

double LabeledDataset::mean_edges() const {
  if (graphs.empty()) return 0.0;
  double total = 0.0;
  for (const Graph& g : graphs) total += static_cast<double>(g.edge_count());
  return total / static_cast<double>(graphs.size());
}

int LabeledDataset::max_nodes() const {
  int n = 0;
  for (const Graph& g : graphs) n = std::max(n, g.node_count());
  return n;
}

void LabeledDataset::validate() const {
  if (labels.size() != graphs.size()) {
    throw DataError(name + ": " + std::to_string(graphs.size()) + " graphs but " + std::to_string(labels.size()) +
                    " labels");
  }
  if (!node_attributes.empty() && node_attributes.size() != graphs.size()) {
    throw DataError(name + ": node attributes present for only some graphs");
  }
}

}  // namespace gefrfe
