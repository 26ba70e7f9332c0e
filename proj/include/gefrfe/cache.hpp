#pragma once

#include <atomic>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include "gefrfe/graph.hpp"
#include "gefrfe/spectral.hpp"

namespace gefrfe {

/// Hex BLAKE2b-128 digest of the node count and sorted edge list.
std::string content_hash(const Graph& g);

/// On-disk store of per-graph spectra keyed by content_hash.
///
/// Entry layout (little-endian, native doubles):
///   "GEFRFEC1" | u64 N | 32-byte ascii hash | N eigenvalues | N*N eigenvectors
///   | N*N Schur vectors | u64 block count | blocks (u64 start, u64 size, f64 angle)
/// Files are written to a temporary name and renamed into place. Entries that
/// fail to parse, carry the wrong hash, or violate the decomposition
/// invariants are recomputed and overwritten.
class DecompositionCache {
 public:
  explicit DecompositionCache(std::filesystem::path dir);

  GraphSpectra load_or_compute(const Graph& g);

  std::filesystem::path entry_path(const std::string& hash) const;

  std::size_t hits() const { return hits_; }
  std::size_t misses() const { return misses_; }
  std::size_t rejected() const { return rejected_; }

 private:
  std::optional<GraphSpectra> try_load(const std::filesystem::path& file, const std::string& hash,
                                       const Eigen::MatrixXd& laplacian);
  void store(const std::filesystem::path& file, const std::string& hash, const GraphSpectra& spectra);

  std::filesystem::path dir_;
  std::atomic<std::size_t> hits_{0};
  std::atomic<std::size_t> misses_{0};
  std::atomic<std::size_t> rejected_{0};
};

/// Serialization helpers, exposed for tests.
void write_spectra(std::ostream& out, const std::string& hash, const GraphSpectra& spectra);
std::optional<GraphSpectra> read_spectra(std::istream& in, const std::string& expected_hash);

}  // namespace gefrfe
