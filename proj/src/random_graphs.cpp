#include "gefrfe/random_graphs.hpp"

#include "gefrfe/errors.hpp"

namespace gefrfe {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

Graph random_graph(int n, double p, std::mt19937_64& rng) {
  std::vector<std::pair<int, int>> edges;
  for (int u = 0; u < n; ++u) {
    for (int v = u + 1; v < n; ++v) {
      if (unit(rng) < p) edges.emplace_back(u, v);
    }
  }
  return Graph(n, edges);
}

Graph random_connected_graph(int n, double p, std::mt19937_64& rng) {
  if (n > 1 && p <= 0.0) throw UsageError("random_connected_graph: p must be positive");
  for (;;) {
    Graph g = random_graph(n, p, rng);
    if (connected_components(g) == 1) return g;
  }
}

}  // namespace gefrfe
