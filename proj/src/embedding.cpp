#include "gefrfe/embedding.hpp"

#include <charconv>
#include <string>

#include "gefrfe/errors.hpp"

namespace gefrfe {

namespace {

std::string shortest(double x) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace

PowerSpectrum power_spectrum(const FractionalOperator& op, int omega) {
  if (omega < 0) throw UsageError("power order must be non-negative, got " + std::to_string(omega));
  const Eigen::MatrixXcd& m = op.matrix();
  const Eigen::Index n = m.rows();
  PowerSpectrum ps{op.alpha(), omega, Eigen::VectorXcd(n)};
  for (Eigen::Index l = 0; l < n; ++l) {
    std::complex<double> sum = 0.0;
    for (Eigen::Index u = 0; u < n; ++u) {
      std::complex<double> term = 1.0;
      for (int k = 0; k < omega; ++k) term *= m(l, u);
      sum += term;
    }
    ps.values(l) = sum;
  }
  return ps;
}

std::string FeatureKey::short_label() const { return filter + "-" + std::to_string(omega); }

std::string FeatureKey::label() const { return short_label() + "-" + shortest(alpha); }

std::vector<FeatureSpec> feature_grid(std::span<const FilterSpec> filters, std::span<const int> powers,
                                      double alpha) {
  std::vector<FeatureSpec> specs;
  specs.reserve(filters.size() * powers.size());
  for (const FilterSpec& f : filters) {
    for (int omega : powers) specs.push_back({f, omega, alpha});
  }
  return specs;
}

Eigen::VectorXd realify(const Eigen::VectorXcd& v) {
  Eigen::VectorXd out(2 * v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out(2 * i) = v(i).real();
    out(2 * i + 1) = v(i).imag();
  }
  return out;
}

Eigen::VectorXd pad_to(const Eigen::VectorXd& v, Eigen::Index length) {
  if (v.size() > length) {
    throw UsageError("pad_to: vector of length " + std::to_string(v.size()) + " exceeds target " +
                     std::to_string(length));
  }
  Eigen::VectorXd out = Eigen::VectorXd::Zero(length);
  out.head(v.size()) = v;
  return out;
}

EmbeddingFeature feature(const SpectralDecomposition& dec, const FractionalOperator& op, const FilterSpec& filter,
                         int omega, Eigen::Index padded_nodes) {
  const Eigen::VectorXd response = evaluate_filter(filter, dec.eigenvalues);
  const PowerSpectrum ps = power_spectrum(op, omega);
  const Eigen::VectorXcd filtered = response.cast<std::complex<double>>().cwiseProduct(ps.values);
  return {FeatureKey{filter.name(), omega, op.alpha()}, pad_to(realify(filtered), 2 * padded_nodes)};
}

Eigen::VectorXd assemble(std::span<const EmbeddingFeature> features) {
  if (features.empty()) return {};
  const Eigen::Index width = features.front().values.size();
  Eigen::VectorXd row(width * static_cast<Eigen::Index>(features.size()));
  for (std::size_t i = 0; i < features.size(); ++i) {
    if (features[i].values.size() != width) {
      throw UsageError("assemble: feature '" + features[i].key.label() + "' has length " +
                       std::to_string(features[i].values.size()) + ", expected " + std::to_string(width));
    }
    row.segment(static_cast<Eigen::Index>(i) * width, width) = features[i].values;
  }
  return row;
}

std::vector<std::string> EmbeddingMatrix::column_names() const {
  std::vector<std::string> names;
  names.reserve(blocks.size() * static_cast<std::size_t>(block_width()));
  for (const FeatureKey& key : blocks) {
    const std::string base = key.label();
    for (Eigen::Index i = 0; i < padded_nodes; ++i) {
      names.push_back(base + "[" + std::to_string(i) + "][re]");
      names.push_back(base + "[" + std::to_string(i) + "][im]");
    }
  }
  return names;
}

}  // namespace gefrfe
