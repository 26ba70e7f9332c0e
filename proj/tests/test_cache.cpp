#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>

#include "gefrfe/cache.hpp"
#include "gefrfe/pipeline.hpp"
#include "support/oracles.hpp"

using namespace gefrfe;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("gefrfe_cache_" + std::to_string(rd()) + std::to_string(rd()));
  }
  ~TempDir() { fs::remove_all(path); }
};

bool same(const GraphSpectra& a, const GraphSpectra& b) {
  return a.dec.eigenvalues == b.dec.eigenvalues && a.dec.eigenvectors == b.dec.eigenvectors &&
         a.basis->schur_vectors() == b.basis->schur_vectors() && a.basis->angles() == b.basis->angles();
}

}  // namespace

TEST_CASE("content hash") {
  const Graph a(3, {{0, 1}, {1, 2}});
  const Graph b(3, {{2, 1}, {1, 0}});
  const Graph c(4, {{0, 1}, {1, 2}});
  CHECK(content_hash(a) == content_hash(b));
  CHECK(content_hash(a) != content_hash(c));
  CHECK(content_hash(a).size() == 32);
}

TEST_CASE("serialization round trip") {
  const Graph g = testing::random_connected_graphs(1, 9, 9, 0.4, 4).front();
  const GraphSpectra s = compute_spectra(laplacian(g));
  std::stringstream buf;
  write_spectra(buf, content_hash(g), s);
  const auto back = read_spectra(buf, content_hash(g));
  REQUIRE(back);
  CHECK(same(*back, s));

  std::stringstream wrong_hash(buf.str());
  CHECK_FALSE(read_spectra(wrong_hash, std::string(32, '0')));
  std::stringstream truncated(buf.str().substr(0, buf.str().size() - 5));
  CHECK_FALSE(read_spectra(truncated, content_hash(g)));
  std::stringstream trailing(buf.str() + "x");
  CHECK_FALSE(read_spectra(trailing, content_hash(g)));
}

TEST_CASE("cold and warm runs agree bit for bit") {
  TempDir dir;
  const LabeledDataset d = testing::structured_dataset(6, 4, 10, 3);
  const SpectralDataset plain = prepare(d);

  DecompositionCache cold(dir.path);
  const SpectralDataset first = prepare(d, &cold);
  std::set<std::string> distinct;
  for (const Graph& g : d.graphs) distinct.insert(content_hash(g));
  CHECK(cold.misses() == distinct.size());
  CHECK(cold.hits() + cold.misses() == d.size());

  DecompositionCache warm(dir.path);
  const SpectralDataset second = prepare(d, &warm);
  CHECK(warm.hits() == d.size());
  CHECK(warm.misses() == 0);

  const auto specs = feature_grid(default_filter_bank(), std::vector<int>{0, 1, 2, 3, 4, 5}, 0.7);
  const Eigen::MatrixXd e0 = embed(plain, specs).rows;
  CHECK(embed(first, specs).rows == e0);
  CHECK(embed(second, specs).rows == e0);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(same(second.spectra[i], plain.spectra[i]));
}

TEST_CASE("corrupted entries are recomputed") {
  TempDir dir;
  const Graph g = testing::random_connected_graphs(1, 8, 8, 0.5, 6).front();
  const GraphSpectra reference = compute_spectra(laplacian(g));
  const std::string hash = content_hash(g);
  {
    DecompositionCache c(dir.path);
    c.load_or_compute(g);
  }
  const fs::path entry = DecompositionCache(dir.path).entry_path(hash);
  REQUIRE(fs::exists(entry));

  SUBCASE("garbage bytes") { std::ofstream(entry, std::ios::binary) << "nonsense"; }
  SUBCASE("perturbed eigenvector") {
    std::fstream f(entry, std::ios::binary | std::ios::in | std::ios::out);
    const auto offset = 8 + 8 + 32 + 8 * 8 + 8 * 10;
    f.seekp(offset);
    const double bad = 0.25;
    f.write(reinterpret_cast<const char*>(&bad), sizeof bad);
  }
  SUBCASE("misordered eigenvalues") {
    std::fstream f(entry, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(8 + 8 + 32);
    const double big = 100.0;
    f.write(reinterpret_cast<const char*>(&big), sizeof big);
  }

  DecompositionCache c(dir.path);
  const GraphSpectra s = c.load_or_compute(g);
  CHECK(c.rejected() == 1);
  CHECK(same(s, reference));

  DecompositionCache again(dir.path);
  again.load_or_compute(g);
  CHECK(again.hits() == 1);
  CHECK(again.rejected() == 0);
}
