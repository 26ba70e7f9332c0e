#pragma once

#include <span>
#include <string>
#include <vector>

#include "gefrfe/cache.hpp"
#include "gefrfe/embedding.hpp"
#include "gefrfe/graph.hpp"
#include "gefrfe/spectral.hpp"

namespace gefrfe {

/// Per-graph spectra of a labeled dataset plus the padded feature width.
struct SpectralDataset {
  std::string name;
  std::vector<GraphSpectra> spectra;
  std::vector<int> labels;
  Eigen::Index padded_nodes = 0;

  std::size_t size() const { return spectra.size(); }
};

// OpenMP kernels. Each graph writes only its own slot, so results do not
// depend on the thread count and match the serial versions bit for bit.

/// Decomposes every graph (through `cache` when given).
SpectralDataset prepare(const LabeledDataset& data, DecompositionCache* cache = nullptr);

/// One embedding row per graph. F^alpha is formed once per distinct alpha and
/// each power spectrum once per (alpha, omega) pair.
EmbeddingMatrix embed(const SpectralDataset& data, std::span<const FeatureSpec> specs);

/// Embedding row of a single graph.
Eigen::VectorXd embed_graph(const GraphSpectra& spectra, std::span<const FeatureSpec> specs,
                            Eigen::Index padded_nodes);

namespace serial {

SpectralDataset prepare(const LabeledDataset& data);
EmbeddingMatrix embed(const SpectralDataset& data, std::span<const FeatureSpec> specs);

}  // namespace serial

}  // namespace gefrfe
