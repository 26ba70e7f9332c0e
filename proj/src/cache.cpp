#include "gefrfe/cache.hpp"

#include <cstring>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <sodium.h>

#include "gefrfe/errors.hpp"

namespace gefrfe {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[8] = {'G', 'E', 'F', 'R', 'F', 'E', 'C', '1'};
constexpr std::size_t kHashChars = 32;
constexpr std::uint64_t kMaxNodes = 1u << 16;

template <class T>
void put(std::ostream& out, T value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof value);
}

template <class T>
bool get(std::istream& in, T& value) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(&value), sizeof value));
}

void put_doubles(std::ostream& out, const double* data, std::size_t count) {
  out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
}

bool get_doubles(std::istream& in, double* data, std::size_t count) {
  return static_cast<bool>(in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double))));
}

void warn(const std::string& message) {
#pragma omp critical(gefrfe_log)
  std::cerr << "warning: " << message << '\n';
}

bool satisfies_invariants(const GraphSpectra& s, const Eigen::MatrixXd& laplacian) {
  const SpectralDecomposition& dec = s.dec;
  const Eigen::Index n = dec.size();
  if (laplacian.rows() != n) return false;
  if (!dec.eigenvalues.allFinite() || !dec.eigenvectors.allFinite()) return false;
  for (Eigen::Index i = 1; i < n; ++i) {
    if (dec.eigenvalues(i) < dec.eigenvalues(i - 1)) return false;
  }
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const double scale = std::max(1.0, laplacian.norm());
  const Eigen::MatrixXd& v = dec.eigenvectors;
  if ((v * dec.eigenvalues.asDiagonal() * v.transpose() - laplacian).norm() > 1e-10 * scale) return false;
  if ((v.transpose() * v - eye).norm() > 1e-10) return false;
  const Eigen::MatrixXd& u = s.basis->schur_vectors();
  if ((u.transpose() * u - eye).norm() > 1e-10) return false;
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (const SchurBlock& blk : s.basis->blocks()) {
    if (blk.size == 1) {
      b(blk.start, blk.start) = std::cos(blk.angle);
    } else {
      const double c = std::cos(blk.angle), sn = std::sin(blk.angle);
      b(blk.start, blk.start) = c;
      b(blk.start, blk.start + 1) = -sn;
      b(blk.start + 1, blk.start) = sn;
      b(blk.start + 1, blk.start + 1) = c;
    }
  }
  return (u * b * u.transpose() - v.transpose()).norm() <= 1e-8;
}

}  // namespace

std::string content_hash(const Graph& g) {
  static const int init = sodium_init();
  (void)init;
  std::vector<std::uint64_t> words;
  words.reserve(1 + 2 * g.edge_count());
  words.push_back(static_cast<std::uint64_t>(g.node_count()));
  for (const Edge& e : g.edges()) {
    words.push_back(static_cast<std::uint64_t>(e.u));
    words.push_back(static_cast<std::uint64_t>(e.v));
  }
  unsigned char digest[kHashChars / 2];
  crypto_generichash(digest, sizeof digest, reinterpret_cast<const unsigned char*>(words.data()),
                     words.size() * sizeof(std::uint64_t), nullptr, 0);
  char hex[kHashChars + 1];
  sodium_bin2hex(hex, sizeof hex, digest, sizeof digest);
  return std::string(hex, kHashChars);
}

void write_spectra(std::ostream& out, const std::string& hash, const GraphSpectra& spectra) {
  const auto n = static_cast<std::uint64_t>(spectra.dec.size());
  out.write(kMagic, sizeof kMagic);
  put(out, n);
  std::string padded = hash;
  padded.resize(kHashChars, ' ');
  out.write(padded.data(), kHashChars);
  put_doubles(out, spectra.dec.eigenvalues.data(), n);
  put_doubles(out, spectra.dec.eigenvectors.data(), n * n);
  put_doubles(out, spectra.basis->schur_vectors().data(), n * n);
  put(out, static_cast<std::uint64_t>(spectra.basis->blocks().size()));
  for (const SchurBlock& b : spectra.basis->blocks()) {
    put(out, static_cast<std::uint64_t>(b.start));
    put(out, static_cast<std::uint64_t>(b.size));
    put(out, b.angle);
  }
}

std::optional<GraphSpectra> read_spectra(std::istream& in, const std::string& expected_hash) {
  char magic[sizeof kMagic];
  if (!in.read(magic, sizeof magic) || std::memcmp(magic, kMagic, sizeof kMagic) != 0) return std::nullopt;
  std::uint64_t n = 0;
  if (!get(in, n) || n == 0 || n > kMaxNodes) return std::nullopt;
  std::string hash(kHashChars, ' ');
  if (!in.read(hash.data(), kHashChars)) return std::nullopt;
  std::string expected = expected_hash;
  expected.resize(kHashChars, ' ');
  if (hash != expected) return std::nullopt;

  const auto dim = static_cast<Eigen::Index>(n);
  GraphSpectra s;
  s.dec.eigenvalues.resize(dim);
  s.dec.eigenvectors.resize(dim, dim);
  Eigen::MatrixXd u(dim, dim);
  if (!get_doubles(in, s.dec.eigenvalues.data(), n) || !get_doubles(in, s.dec.eigenvectors.data(), n * n) ||
      !get_doubles(in, u.data(), n * n)) {
    return std::nullopt;
  }
  std::uint64_t block_count = 0;
  if (!get(in, block_count) || block_count > n) return std::nullopt;
  std::vector<SchurBlock> blocks;
  std::uint64_t next = 0;
  for (std::uint64_t i = 0; i < block_count; ++i) {
    std::uint64_t start = 0, size = 0;
    double angle = 0.0;
    if (!get(in, start) || !get(in, size) || !get(in, angle)) return std::nullopt;
    if (start != next || (size != 1 && size != 2) || start + size > n) return std::nullopt;
    blocks.push_back({static_cast<Eigen::Index>(start), static_cast<int>(size), angle});
    next = start + size;
  }
  if (next != n) return std::nullopt;
  if (in.peek() != std::char_traits<char>::eof()) return std::nullopt;
  s.basis = std::make_shared<const FractionalBasis>(std::move(u), std::move(blocks));
  return s;
}

DecompositionCache::DecompositionCache(fs::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  fs::create_directories(dir_, ec);
  if (ec || !fs::is_directory(dir_)) throw DataError("cannot create cache directory " + dir_.string());
}

fs::path DecompositionCache::entry_path(const std::string& hash) const { return dir_ / (hash + ".spec"); }

GraphSpectra DecompositionCache::load_or_compute(const Graph& g) {
  const std::string hash = content_hash(g);
  const fs::path file = entry_path(hash);
  const Eigen::MatrixXd lap = laplacian(g);
  if (fs::exists(file)) {
    if (auto loaded = try_load(file, hash, lap)) {
      ++hits_;
      return std::move(*loaded);
    }
    ++rejected_;
    warn("cache entry " + file.string() + " is unreadable or inconsistent; recomputing");
  } else {
    ++misses_;
  }
  GraphSpectra s = compute_spectra(lap);
  store(file, hash, s);
  return s;
}

std::optional<GraphSpectra> DecompositionCache::try_load(const fs::path& file, const std::string& hash,
                                                         const Eigen::MatrixXd& laplacian) {
  std::ifstream in(file, std::ios::binary);
  if (!in) return std::nullopt;
  auto loaded = read_spectra(in, hash);
  if (!loaded || !satisfies_invariants(*loaded, laplacian)) return std::nullopt;
  return loaded;
}

void DecompositionCache::store(const fs::path& file, const std::string& hash, const GraphSpectra& spectra) {
  std::ostringstream suffix;
  suffix << ".tmp." << std::this_thread::get_id() << "." << std::random_device{}();
  const fs::path tmp = file.string() + suffix.str();
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      warn("cannot write cache entry " + tmp.string());
      return;
    }
    write_spectra(out, hash, spectra);
    if (!out) {
      warn("short write to cache entry " + tmp.string());
      return;
    }
  }
  std::error_code ec;
  fs::rename(tmp, file, ec);
  if (ec) {
    warn("cannot move cache entry into place: " + ec.message());
    fs::remove(tmp, ec);
  }
}

}  // namespace gefrfe
