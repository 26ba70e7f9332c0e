#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "gefrfe/filters.hpp"
#include "gefrfe/spectral.hpp"

namespace gefrfe {

/// Entry l is sum_u (F^alpha[l, u])^omega, i.e. the powered entry sum of the
/// l-th fractional basis vector (the eigenvector phi_l when alpha = 1).
struct PowerSpectrum {
  double alpha = 0.0;
  int omega = 0;
  Eigen::VectorXcd values;
};

/// Powers use repeated multiplication and 0^0 = 1. Throws UsageError for omega < 0.
PowerSpectrum power_spectrum(const FractionalOperator& op, int omega);

/// Identifies one block of an embedding row.
struct FeatureKey {
  std::string filter;
  int omega = 0;
  double alpha = 1.0;

  /// "AH1-0" style label used in reports.
  std::string short_label() const;
  /// "AH1-0-0.54" style label used in CSV headers.
  std::string label() const;

  friend bool operator==(const FeatureKey&, const FeatureKey&) = default;
};

/// Recipe for one feature: which filter, which power, which order.
struct FeatureSpec {
  FilterSpec filter;
  int omega;
  double alpha;

  FeatureKey key() const { return {filter.name(), omega, alpha}; }
};

/// Filter-major, power-minor product of `filters` and `powers` at one shared alpha.
std::vector<FeatureSpec> feature_grid(std::span<const FilterSpec> filters, std::span<const int> powers,
                                      double alpha);

struct EmbeddingFeature {
  FeatureKey key;
  Eigen::VectorXd values;  // realified and padded, length 2 * padded_nodes
};

/// (Re v_1, Im v_1, Re v_2, Im v_2, ...).
Eigen::VectorXd realify(const Eigen::VectorXcd& v);

/// Zero-extends on the right. Throws UsageError if `v` is longer than `length`.
Eigen::VectorXd pad_to(const Eigen::VectorXd& v, Eigen::Index length);

/// H(lambda_l) * X_hat^alpha_omega(lambda_l), realified, padded to 2 * padded_nodes.
EmbeddingFeature feature(const SpectralDecomposition& dec, const FractionalOperator& op,
                         const FilterSpec& filter, int omega, Eigen::Index padded_nodes);

/// Concatenates features in the given order. Throws UsageError on unequal lengths.
Eigen::VectorXd assemble(std::span<const EmbeddingFeature> features);

/// One row per graph, blocks in the order of `blocks`.
struct EmbeddingMatrix {
  std::vector<FeatureKey> blocks;
  Eigen::Index padded_nodes = 0;
  Eigen::MatrixXd rows;

  Eigen::Index block_width() const { return 2 * padded_nodes; }
  /// Columns belonging to block `b`.
  auto block(std::size_t b) const {
    return rows.middleCols(static_cast<Eigen::Index>(b) * block_width(), block_width());
  }
  /// Header entries `filter-omega-alpha[index][re|im]`.
  std::vector<std::string> column_names() const;
};

}  // namespace gefrfe
