#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "gefrfe/embedding.hpp"

namespace gefrfe {

struct ScalingPoint {
  int nodes = 0;
  double seconds_per_graph = 0.0;
};

/// Single-threaded wall time of spectra + embedding per random connected
/// graph, for each size in `sizes`. Each size is timed over at least
/// `min_seconds` and the fastest of three passes is kept.
std::vector<ScalingPoint> measure_embedding_scaling(std::span<const int> sizes, int graphs_per_size, double edge_prob,
                                                    std::span<const FeatureSpec> specs, std::uint64_t seed,
                                                    double min_seconds = 0.05);

/// Least-squares slope of log(seconds) against log(nodes).
double loglog_slope(std::span<const ScalingPoint> points);

}  // namespace gefrfe
