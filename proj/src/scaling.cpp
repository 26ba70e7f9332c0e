#include "gefrfe/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>

#include "gefrfe/errors.hpp"
#include "gefrfe/pipeline.hpp"
#include "gefrfe/random_graphs.hpp"

namespace gefrfe {

std::vector<ScalingPoint> measure_embedding_scaling(std::span<const int> sizes, int graphs_per_size, double edge_prob,
                                                    std::span<const FeatureSpec> specs, std::uint64_t seed,
                                                    double min_seconds) {
  if (sizes.empty() || graphs_per_size < 1) throw UsageError("scaling needs at least one size and one graph");
  if (!(edge_prob > 0.0 && edge_prob <= 1.0)) throw UsageError("edge probability must be in (0, 1]");
  using clock = std::chrono::steady_clock;
  std::vector<ScalingPoint> out;
  for (int n : sizes) {
    if (n < 2) throw UsageError("scaling sizes must be >= 2");
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(n));
    std::vector<Graph> graphs;
    for (int i = 0; i < graphs_per_size; ++i) graphs.push_back(random_connected_graph(n, edge_prob, rng));

    double best = std::numeric_limits<double>::infinity();
    double checksum = 0.0;
    for (int pass = 0; pass < 3; ++pass) {
      std::size_t done = 0;
      const auto start = clock::now();
      double elapsed = 0.0;
      do {
        for (const Graph& g : graphs) {
          const GraphSpectra s = compute_spectra(laplacian(g));
          checksum += embed_graph(s, specs, n)(0);
          ++done;
        }
        elapsed = std::chrono::duration<double>(clock::now() - start).count();
      } while (elapsed < min_seconds);
      best = std::min(best, elapsed / static_cast<double>(done));
    }
    if (!std::isfinite(checksum)) throw NumericError("non-finite embedding while timing");
    out.push_back({n, best});
  }
  return out;
}

double loglog_slope(std::span<const ScalingPoint> points) {
  if (points.size() < 2) throw UsageError("slope needs at least two points");
  double mx = 0.0, my = 0.0;
  for (const ScalingPoint& p : points) {
    mx += std::log(static_cast<double>(p.nodes));
    my += std::log(p.seconds_per_graph);
  }
  mx /= static_cast<double>(points.size());
  my /= static_cast<double>(points.size());
  double sxy = 0.0, sxx = 0.0;
  for (const ScalingPoint& p : points) {
    const double dx = std::log(static_cast<double>(p.nodes)) - mx;
    sxy += dx * (std::log(p.seconds_per_graph) - my);
    sxx += dx * dx;
  }
  if (sxx == 0.0) throw UsageError("slope needs at least two distinct sizes");
  return sxy / sxx;
}

}  // namespace gefrfe
