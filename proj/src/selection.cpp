#include "gefrfe/selection.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

#include "gefrfe/errors.hpp"

namespace gefrfe {

namespace {

double round9(double x) { return std::round(x * 1e9) / 1e9; }

void require_one(const std::vector<double>& points) {
  if (std::find(points.begin(), points.end(), 1.0) == points.end()) {
    throw UsageError("alpha grid must contain alpha = 1");
  }
}

constexpr std::size_t kDistanceCacheBudget = std::size_t{1} << 30;

}  // namespace

AlphaGrid::AlphaGrid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(lo < hi) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw UsageError("alpha grid needs lo < hi and step > 0");
  }
  const double span = (hi - lo) / step;
  const auto count = static_cast<long long>(std::llround(span));
  if (std::abs(span - static_cast<double>(count)) > 1e-6) {
    throw UsageError("alpha grid step does not divide hi - lo");
  }
  points_.reserve(static_cast<std::size_t>(count) + 1);
  for (long long k = 0; k <= count; ++k) points_.push_back(round9(lo + static_cast<double>(k) * step));
  require_one(points_);
}

AlphaGrid::AlphaGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.empty()) throw UsageError("alpha grid is empty");
  for (double a : points_) {
    if (!std::isfinite(a)) throw UsageError("alpha grid contains a non-finite value");
  }
  require_one(points_);
}

AlphaGrid AlphaGrid::thinned(int stride) const {
  if (stride < 1) throw UsageError("grid stride must be >= 1");
  const auto one = static_cast<long long>(std::find(points_.begin(), points_.end(), 1.0) - points_.begin());
  std::vector<double> kept;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if ((static_cast<long long>(i) - one) % stride == 0) kept.push_back(points_[i]);
  }
  return AlphaGrid(std::move(kept));
}

bool better_alpha(double alpha_a, double acc_a, double alpha_b, double acc_b) {
  if (acc_a != acc_b) return acc_a > acc_b;
  const double da = std::abs(alpha_a - 1.0);
  const double db = std::abs(alpha_b - 1.0);
  if (da != db) return da < db;
  return alpha_a < alpha_b;
}

double AccuracyReport::accuracy_at(double alpha) const {
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    if (alphas[i] == alpha) return accuracies[i];
  }
  throw std::out_of_range("alpha not in report");
}

AccuracyReport grid_search_alpha(const SpectralDataset& data, std::span<const FilterSpec> filters,
                                 std::span<const int> powers, const AlphaGrid& grid, const EvalConfig& cfg) {
  if (filters.empty() || powers.empty()) throw UsageError("grid search needs at least one filter and one power");
  AccuracyReport report;
  bool first = true;
  for (double alpha : grid.points()) {
    const auto specs = feature_grid(filters, powers, alpha);
    const EmbeddingMatrix m = embed(data, specs);
    CvResult cv = cross_validate_detailed(m.rows, data.labels, cfg);
    report.alphas.push_back(alpha);
    report.accuracies.push_back(cv.mean_accuracy);
    if (first || better_alpha(alpha, cv.mean_accuracy, report.best_alpha, report.best_accuracy)) {
      report.best_alpha = alpha;
      report.best_accuracy = cv.mean_accuracy;
      first = false;
    }
    report.details.push_back(std::move(cv));
  }
  return report;
}

std::vector<FeatureSearchResult> per_feature_alpha_search_all(const SpectralDataset& data,
                                                              std::span<const FilterSpec> filters,
                                                              std::span<const int> powers, const AlphaGrid& grid,
                                                              const EvalConfig& cfg) {
  if (filters.empty() || powers.empty()) throw UsageError("feature search needs at least one filter and one power");
  std::vector<FeatureSearchResult> results;
  for (const FilterSpec& f : filters) {
    for (int omega : powers) {
      FeatureSearchResult r;
      r.key = FeatureKey{f.name(), omega, 1.0};
      results.push_back(std::move(r));
    }
  }
  std::vector<bool> seen(results.size(), false);
  for (double alpha : grid.points()) {
    const auto specs = feature_grid(filters, powers, alpha);
    const EmbeddingMatrix m = embed(data, specs);
    for (std::size_t b = 0; b < specs.size(); ++b) {
      const Eigen::MatrixXd block = m.block(b);
      CvResult cv = cross_validate_distances(pairwise_sq_distances(block), data.labels, cfg);
      FeatureSearchResult& r = results[b];
      r.sweep.alphas.push_back(alpha);
      r.sweep.accuracies.push_back(cv.mean_accuracy);
      if (!seen[b] || better_alpha(alpha, cv.mean_accuracy, r.sweep.best_alpha, r.sweep.best_accuracy)) {
        seen[b] = true;
        r.sweep.best_alpha = alpha;
        r.sweep.best_accuracy = cv.mean_accuracy;
        r.block = block;
      }
      r.sweep.details.push_back(std::move(cv));
    }
  }
  for (FeatureSearchResult& r : results) {
    r.key.alpha = r.sweep.best_alpha;
    r.best_accuracy = r.sweep.best_accuracy;
  }
  return results;
}

FeatureSearchResult per_feature_alpha_search(const SpectralDataset& data, const FilterSpec& filter, int omega,
                                             const AlphaGrid& grid, const EvalConfig& cfg) {
  const FilterSpec filters[] = {filter};
  const int powers[] = {omega};
  return std::move(per_feature_alpha_search_all(data, filters, powers, grid, cfg).front());
}

std::vector<Candidate> candidates_from(std::vector<FeatureSearchResult> results) {
  std::vector<Candidate> out;
  out.reserve(results.size());
  for (FeatureSearchResult& r : results) out.push_back({r.key, std::move(r.block)});
  return out;
}

ForwardResult forward_select(std::span<const Candidate> candidates, std::span<const int> labels,
                             const EvalConfig& cfg) {
  if (candidates.empty()) throw UsageError("forward selection needs at least one candidate");
  const std::size_t n = labels.size();
  for (const Candidate& c : candidates) {
    if (static_cast<std::size_t>(c.block.rows()) != n) {
      throw UsageError("candidate '" + c.key.label() + "' does not have one row per sample");
    }
  }
  const bool keep_all = n * n * sizeof(double) * candidates.size() <= kDistanceCacheBudget;
  std::vector<std::optional<Eigen::MatrixXd>> cache(candidates.size());
  Eigen::MatrixXd scratch;
  auto distances = [&](std::size_t c) -> const Eigen::MatrixXd& {
    if (cache[c]) return *cache[c];
    if (keep_all) return cache[c].emplace(pairwise_sq_distances(candidates[c].block));
    scratch = pairwise_sq_distances(candidates[c].block);
    return scratch;
  };

  ForwardResult result;
  std::vector<bool> used(candidates.size(), false);
  Eigen::MatrixXd combined = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  Eigen::MatrixXd trial;
  double current = -1.0;
  while (result.selected.size() < candidates.size()) {
    std::optional<std::size_t> best;
    double best_acc = -1.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (used[c]) continue;
      trial = combined + distances(c);
      const double acc = cross_validate_distances(trial, labels, cfg).mean_accuracy;
      if (acc > best_acc) {
        best_acc = acc;
        best = c;
      }
    }
    if (!best || best_acc <= current) break;
    used[*best] = true;
    combined += distances(*best);
    result.selected.push_back(*best);
    result.trace.push_back(best_acc);
    current = best_acc;
  }
  return result;
}

CvResult evaluate_all(std::span<const Candidate> candidates, std::span<const int> labels, const EvalConfig& cfg) {
  if (candidates.empty()) throw UsageError("nothing to evaluate");
  Eigen::Index width = 0;
  for (const Candidate& c : candidates) width += c.block.cols();
  Eigen::MatrixXd rows(static_cast<Eigen::Index>(labels.size()), width);
  Eigen::Index at = 0;
  for (const Candidate& c : candidates) {
    rows.middleCols(at, c.block.cols()) = c.block;
    at += c.block.cols();
  }
  return cross_validate_detailed(rows, labels, cfg);
}

}  // namespace gefrfe
