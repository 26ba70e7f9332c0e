#pragma once

#include <random>

#include "gefrfe/graph.hpp"

namespace gefrfe {

/// Erdos-Renyi G(n, p).
Graph random_graph(int n, double p, std::mt19937_64& rng);

/// G(n, p) resampled until connected.
Graph random_connected_graph(int n, double p, std::mt19937_64& rng);

}  // namespace gefrfe
