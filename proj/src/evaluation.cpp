#include "gefrfe/evaluation.hpp"

#include <algorithm>
#include <exception>
#include <limits>
#include <random>
#include <string>

#include "gefrfe/errors.hpp"

namespace gefrfe {

namespace {

// Four interleaved partial sums combined in a fixed order, so every caller
// (serial or parallel, any thread count) gets the same bits.
double sq_dist(const double* a, const double* b, Eigen::Index len) {
  double s0 = 0.0, s1 = 0.0, s2 = 0.0, s3 = 0.0;
  Eigen::Index i = 0;
  for (; i + 4 <= len; i += 4) {
    const double d0 = a[i] - b[i];
    const double d1 = a[i + 1] - b[i + 1];
    const double d2 = a[i + 2] - b[i + 2];
    const double d3 = a[i + 3] - b[i + 3];
    s0 += d0 * d0;
    s1 += d1 * d1;
    s2 += d2 * d2;
    s3 += d3 * d3;
  }
  for (; i < len; ++i) {
    const double d = a[i] - b[i];
    s0 += d * d;
  }
  return (s0 + s1) + (s2 + s3);
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Unbiased draw from [0, bound).
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

struct Neighbor {
  double dist;
  std::size_t index;
  bool operator<(const Neighbor& o) const { return dist < o.dist || (dist == o.dist && index < o.index); }
};

// `nearest` must be sorted by (distance, index).
int vote(std::span<const Neighbor> nearest, std::span<const int> labels) {
  std::vector<std::pair<int, int>> counts;  // (label, count)
  for (const Neighbor& nb : nearest) {
    const int label = labels[nb.index];
    auto it = std::find_if(counts.begin(), counts.end(), [&](const auto& c) { return c.first == label; });
    if (it == counts.end()) {
      counts.emplace_back(label, 1);
    } else {
      ++it->second;
    }
  }
  int top = 0;
  for (const auto& c : counts) top = std::max(top, c.second);
  const int nearest_label = labels[nearest.front().index];
  int smallest_tied = std::numeric_limits<int>::max();
  for (const auto& c : counts) {
    if (c.second != top) continue;
    if (c.first == nearest_label) return nearest_label;
    smallest_tied = std::min(smallest_tied, c.first);
  }
  return smallest_tied;
}

// Keeps the k smallest (distance, index) pairs seen so far, sorted.
class TopK {
 public:
  explicit TopK(std::size_t k) : k_(k) { items_.reserve(k + 1); }
  void offer(Neighbor nb) {
    if (items_.size() == k_ && !(nb < items_.back())) return;
    auto pos = std::upper_bound(items_.begin(), items_.end(), nb);
    items_.insert(pos, nb);
    if (items_.size() > k_) items_.pop_back();
  }
  std::span<const Neighbor> items() const { return items_; }
  void clear() { items_.clear(); }

 private:
  std::size_t k_;
  std::vector<Neighbor> items_;
};

Eigen::MatrixXd sq_distances_impl(const Eigen::MatrixXd& rows, bool parallel) {
  const Eigen::MatrixXd samples = rows.transpose();  // one contiguous column per sample
  const Eigen::Index n = samples.cols();
  const Eigen::Index w = samples.rows();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
#pragma omp parallel for schedule(dynamic, 16) if (parallel)
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      d(j, i) = sq_dist(samples.col(i).data(), samples.col(j).data(), w);
    }
  }
  // mirror the lower triangle in tiles to keep both sides cache resident
  constexpr Eigen::Index tile = 64;
  for (Eigen::Index jb = 0; jb < n; jb += tile) {
    for (Eigen::Index ib = 0; ib <= jb; ib += tile) {
      const Eigen::Index jend = std::min(n, jb + tile);
      for (Eigen::Index j = jb; j < jend; ++j) {
        const Eigen::Index iend = std::min(j, ib + tile);
        for (Eigen::Index i = ib; i < iend; ++i) d(i, j) = d(j, i);
      }
    }
  }
  return d;
}

// For every sample, the first `width` other-or-same samples in (distance, index)
// order. A fold's k nearest training rows are the first k entries of this
// list that are not in the test fold; when fewer than k survive, the caller
// falls back to a full scan.
struct NeighborTable {
  std::size_t width = 0;
  std::vector<std::size_t> order;  // n * width

  const std::size_t* row(std::size_t i) const { return order.data() + i * width; }
};

NeighborTable build_neighbors(const Eigen::MatrixXd& d, int k, bool parallel) {
  const auto n = static_cast<std::size_t>(d.rows());
  NeighborTable t;
  t.width = std::min(n, static_cast<std::size_t>(8 * k + 8));
  t.order.resize(n * t.width);
#pragma omp parallel if (parallel)
  {
    // Candidates below the current cutoff are buffered; a full buffer is cut
    // back to the best `width` entries, which tightens the cutoff.
    const std::size_t w = t.width;
    std::vector<Neighbor> buf;
    buf.reserve(4 * w);
#pragma omp for schedule(static)
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
      const double* col = d.col(static_cast<Eigen::Index>(i)).data();
      buf.clear();
      Neighbor cutoff{std::numeric_limits<double>::infinity(), std::numeric_limits<std::size_t>::max()};
      for (std::size_t j = 0; j < n; ++j) {
        const Neighbor nb{col[j], j};
        if (!(nb < cutoff)) continue;
        buf.push_back(nb);
        if (buf.size() == 4 * w) {
          std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(w - 1), buf.end());
          buf.resize(w);
          cutoff = buf[w - 1];
        }
      }
      if (buf.size() > w) {
        std::nth_element(buf.begin(), buf.begin() + static_cast<std::ptrdiff_t>(w - 1), buf.end());
        buf.resize(w);
      }
      std::sort(buf.begin(), buf.end());
      std::size_t* out = t.order.data() + static_cast<std::size_t>(i) * w;
      for (std::size_t r = 0; r < w; ++r) out[r] = buf[r].index;
    }
  }
  return t;
}

double run_repeat(const Eigen::MatrixXd& d, const NeighborTable& table, std::span<const int> labels,
                  const EvalConfig& cfg, std::uint64_t seed) {
  const std::size_t n = labels.size();
  const auto k = static_cast<std::size_t>(cfg.neighbors);
  const auto folds = fold_partition(n, cfg.folds, seed);
  std::vector<char> in_test(n, 0);
  TopK top(k);
  double fold_sum = 0.0;
  for (const auto& test : folds) {
    for (std::size_t i : test) in_test[i] = 1;
    const std::size_t train_size = n - test.size();
    if (k > train_size) {
      throw UsageError("cross_validate: " + std::to_string(cfg.neighbors) + " neighbours requested but a fold has only " +
                       std::to_string(train_size) + " training samples");
    }
    std::size_t correct = 0;
    for (std::size_t i : test) {
      top.clear();
      const double* col = d.col(static_cast<Eigen::Index>(i)).data();
      const std::size_t* near = table.row(i);
      for (std::size_t r = 0; r < table.width && top.items().size() < k; ++r) {
        if (!in_test[near[r]]) top.offer({col[near[r]], near[r]});
      }
      if (top.items().size() < k) {
        top.clear();
        for (std::size_t j = 0; j < n; ++j) {
          if (!in_test[j]) top.offer({col[j], j});
        }
      }
      if (vote(top.items(), labels) == labels[i]) ++correct;
    }
    fold_sum += static_cast<double>(correct) / static_cast<double>(test.size());
    for (std::size_t i : test) in_test[i] = 0;
  }
  return fold_sum / static_cast<double>(folds.size());
}

CvResult cross_validate_impl(const Eigen::MatrixXd& d, std::span<const int> labels, const EvalConfig& cfg,
                             bool parallel) {
  cfg.validate();
  const std::size_t n = labels.size();
  if (static_cast<std::size_t>(d.rows()) != n || static_cast<std::size_t>(d.cols()) != n) {
    throw UsageError("cross_validate: distance matrix does not match the number of labels");
  }
  if (n < static_cast<std::size_t>(cfg.folds)) {
    throw UsageError("cross_validate: " + std::to_string(n) + " samples is fewer than " + std::to_string(cfg.folds) +
                     " folds");
  }
  CvResult result;
  result.repeat_accuracies.assign(static_cast<std::size_t>(cfg.repeats), 0.0);
  result.repeat_seeds.resize(static_cast<std::size_t>(cfg.repeats));
  for (int r = 0; r < cfg.repeats; ++r) result.repeat_seeds[static_cast<std::size_t>(r)] = repeat_seed(cfg.seed, r);

  if (!d.allFinite()) throw NumericError("cross_validate: distance matrix has non-finite entries");
  const NeighborTable table = build_neighbors(d, cfg.neighbors, parallel);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(cfg.repeats));
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int r = 0; r < cfg.repeats; ++r) {
    const auto idx = static_cast<std::size_t>(r);
    try {
      result.repeat_accuracies[idx] = run_repeat(d, table, labels, cfg, result.repeat_seeds[idx]);
    } catch (...) {
      errors[idx] = std::current_exception();
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  double sum = 0.0;
  for (double a : result.repeat_accuracies) sum += a;
  result.mean_accuracy = sum / static_cast<double>(cfg.repeats);
  return result;
}

}  // namespace

void EvalConfig::validate() const {
  if (neighbors < 1) throw UsageError("neighbors must be >= 1");
  if (folds < 2) throw UsageError("folds must be >= 2");
  if (repeats < 1) throw UsageError("repeats must be >= 1");
}

int knn_predict(const Eigen::MatrixXd& train, std::span<const int> train_labels, const Eigen::VectorXd& query,
                int k) {
  const auto n = static_cast<std::size_t>(train.rows());
  if (n == 0) throw UsageError("knn_predict: empty training set");
  if (train_labels.size() != n) throw UsageError("knn_predict: labels do not match training rows");
  if (k < 1 || static_cast<std::size_t>(k) > n) {
    throw UsageError("knn_predict: k = " + std::to_string(k) + " with " + std::to_string(n) + " training rows");
  }
  if (query.size() != train.cols()) throw UsageError("knn_predict: query width does not match training rows");
  const Eigen::MatrixXd samples = train.transpose();
  TopK top(static_cast<std::size_t>(k));
  for (std::size_t j = 0; j < n; ++j) {
    top.offer({sq_dist(samples.col(static_cast<Eigen::Index>(j)).data(), query.data(), query.size()), j});
  }
  return vote(top.items(), train_labels);
}

Eigen::MatrixXd pairwise_sq_distances(const Eigen::MatrixXd& rows) { return sq_distances_impl(rows, true); }

std::uint64_t repeat_seed(std::uint64_t seed, int repeat) {
  return splitmix64(seed + static_cast<std::uint64_t>(repeat));
}

std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, int folds, std::uint64_t seed) {
  if (folds < 2) throw UsageError("folds must be >= 2");
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[bounded(rng, i)]);
  }
  std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(folds));
  const auto f = static_cast<std::size_t>(folds);
  for (std::size_t k = 0; k < f; ++k) {
    out[k].assign(order.begin() + static_cast<std::ptrdiff_t>(k * n / f),
                  order.begin() + static_cast<std::ptrdiff_t>((k + 1) * n / f));
  }
  return out;
}

CvResult cross_validate_distances(const Eigen::MatrixXd& sq_distances, std::span<const int> labels,
                                  const EvalConfig& cfg) {
  return cross_validate_impl(sq_distances, labels, cfg, true);
}

CvResult cross_validate_detailed(const Eigen::MatrixXd& rows, std::span<const int> labels, const EvalConfig& cfg) {
  cfg.validate();
  if (static_cast<std::size_t>(rows.rows()) != labels.size()) {
    throw UsageError("cross_validate: rows and labels differ in length");
  }
  if (labels.size() < static_cast<std::size_t>(cfg.folds)) {
    throw UsageError("cross_validate: " + std::to_string(labels.size()) + " samples is fewer than " +
                     std::to_string(cfg.folds) + " folds");
  }
  return cross_validate_impl(pairwise_sq_distances(rows), labels, cfg, true);
}

double cross_validate(const Eigen::MatrixXd& rows, std::span<const int> labels, const EvalConfig& cfg) {
  return cross_validate_detailed(rows, labels, cfg).mean_accuracy;
}

namespace serial {

Eigen::MatrixXd pairwise_sq_distances(const Eigen::MatrixXd& rows) { return sq_distances_impl(rows, false); }

CvResult cross_validate_distances(const Eigen::MatrixXd& sq_distances, std::span<const int> labels,
                                  const EvalConfig& cfg) {
  return cross_validate_impl(sq_distances, labels, cfg, false);
}

}  // namespace serial

}  // namespace gefrfe
