#include <exception>
#include <map>
#include <utility>

#include "gefrfe/errors.hpp"
#include "gefrfe/pipeline.hpp"

namespace gefrfe {

namespace {

// Runs body(i) for i in [0, n) under OpenMP and rethrows the exception of the
// lowest failing index, so error reporting matches the serial loop.
template <class Body>
void parallel_for_each_index(std::size_t n, Body&& body) {
  std::vector<std::exception_ptr> errors(n);
  const auto count = static_cast<long long>(n);
#pragma omp parallel for schedule(dynamic)
  for (long long i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      errors[static_cast<std::size_t>(i)] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

SpectralDataset empty_like(const LabeledDataset& data) {
  data.validate();
  SpectralDataset out;
  out.name = data.name;
  out.labels = data.labels;
  out.padded_nodes = data.max_nodes();
  out.spectra.resize(data.graphs.size());
  return out;
}

EmbeddingMatrix empty_embedding(const SpectralDataset& data, std::span<const FeatureSpec> specs) {
  EmbeddingMatrix m;
  m.padded_nodes = data.padded_nodes;
  for (const FeatureSpec& s : specs) m.blocks.push_back(s.key());
  m.rows.resize(static_cast<Eigen::Index>(data.size()),
                static_cast<Eigen::Index>(specs.size()) * m.block_width());
  return m;
}

}  // namespace

Eigen::VectorXd embed_graph(const GraphSpectra& spectra, std::span<const FeatureSpec> specs,
                            Eigen::Index padded_nodes) {
  const Eigen::Index n = spectra.dec.size();
  if (n > padded_nodes) {
    throw UsageError("embed_graph: graph has " + std::to_string(n) + " nodes but padding is " +
                     std::to_string(padded_nodes));
  }
  std::map<double, FractionalOperator> operators;
  std::map<std::pair<double, int>, Eigen::VectorXcd> spectra_cache;
  std::map<std::string, Eigen::VectorXd> responses;

  const Eigen::Index width = 2 * padded_nodes;
  Eigen::VectorXd row = Eigen::VectorXd::Zero(width * static_cast<Eigen::Index>(specs.size()));
  for (std::size_t b = 0; b < specs.size(); ++b) {
    const FeatureSpec& spec = specs[b];
    auto op_it = operators.find(spec.alpha);
    if (op_it == operators.end()) {
      op_it = operators.emplace(spec.alpha, gfrft_matrix(spectra.basis, spec.alpha)).first;
    }
    auto ps_it = spectra_cache.find({spec.alpha, spec.omega});
    if (ps_it == spectra_cache.end()) {
      ps_it = spectra_cache.emplace(std::pair{spec.alpha, spec.omega}, power_spectrum(op_it->second, spec.omega).values)
                  .first;
    }
    const std::string name = spec.filter.name();
    auto r_it = responses.find(name);
    if (r_it == responses.end()) {
      r_it = responses.emplace(name, evaluate_filter(spec.filter, spectra.dec.eigenvalues)).first;
    }
    const Eigen::VectorXcd& powered = ps_it->second;
    const Eigen::VectorXd& h = r_it->second;
    auto block = row.segment(static_cast<Eigen::Index>(b) * width, width);
    for (Eigen::Index l = 0; l < n; ++l) {
      const std::complex<double> v = h(l) * powered(l);
      block(2 * l) = v.real();
      block(2 * l + 1) = v.imag();
    }
  }
  return row;
}

SpectralDataset prepare(const LabeledDataset& data, DecompositionCache* cache) {
  SpectralDataset out = empty_like(data);
  parallel_for_each_index(data.graphs.size(), [&](std::size_t i) {
    out.spectra[i] = cache ? cache->load_or_compute(data.graphs[i]) : compute_spectra(laplacian(data.graphs[i]));
  });
  return out;
}

EmbeddingMatrix embed(const SpectralDataset& data, std::span<const FeatureSpec> specs) {
  EmbeddingMatrix m = empty_embedding(data, specs);
  parallel_for_each_index(data.size(), [&](std::size_t i) {
    m.rows.row(static_cast<Eigen::Index>(i)) = embed_graph(data.spectra[i], specs, data.padded_nodes).transpose();
  });
  return m;
}

namespace serial {

SpectralDataset prepare(const LabeledDataset& data) {
  SpectralDataset out = empty_like(data);
  for (std::size_t i = 0; i < data.graphs.size(); ++i) out.spectra[i] = compute_spectra(laplacian(data.graphs[i]));
  return out;
}

EmbeddingMatrix embed(const SpectralDataset& data, std::span<const FeatureSpec> specs) {
  EmbeddingMatrix m = empty_embedding(data, specs);
  for (std::size_t i = 0; i < data.size(); ++i) {
    m.rows.row(static_cast<Eigen::Index>(i)) = embed_graph(data.spectra[i], specs, data.padded_nodes).transpose();
  }
  return m;
}

}  // namespace serial

}  // namespace gefrfe
