#pragma once

#include <span>
#include <vector>

#include "gefrfe/embedding.hpp"
#include "gefrfe/evaluation.hpp"
#include "gefrfe/filters.hpp"
#include "gefrfe/pipeline.hpp"

namespace gefrfe {

/// Fractional orders to try. Always contains alpha = 1 exactly.
class AlphaGrid {
 public:
  /// lo, lo + step, ..., hi (both ends inclusive). Points are rounded to 1e-9.
  AlphaGrid(double lo, double hi, double step);
  /// Explicit list; must contain 1.
  explicit AlphaGrid(std::vector<double> points);

  /// -3 to 3 in steps of 0.02, 301 points.
  static AlphaGrid standard() { return AlphaGrid(-3.0, 3.0, 0.02); }

  const std::vector<double>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }

  /// Every `stride`-th point counted from alpha = 1 in both directions.
  AlphaGrid thinned(int stride) const;

 private:
  std::vector<double> points_;
};

/// True when (alpha_a, acc_a) should replace (alpha_b, acc_b) as the best entry:
/// higher accuracy, then smaller |alpha - 1|, then smaller alpha.
bool better_alpha(double alpha_a, double acc_a, double alpha_b, double acc_b);

struct AccuracyReport {
  std::vector<double> alphas;
  std::vector<double> accuracies;
  std::vector<CvResult> details;
  double best_alpha = 1.0;
  double best_accuracy = 0.0;

  /// Accuracy recorded for `alpha`; throws std::out_of_range when absent.
  double accuracy_at(double alpha) const;
};

/// Shared-alpha sweep: every grid point embeds all filter x power features at
/// that alpha and cross-validates the concatenation.
AccuracyReport grid_search_alpha(const SpectralDataset& data, std::span<const FilterSpec> filters,
                                 std::span<const int> powers, const AlphaGrid& grid, const EvalConfig& cfg);

/// Best single (filter, omega) feature over the grid.
struct FeatureSearchResult {
  FeatureKey key;  // alpha = best alpha
  double best_accuracy = 0.0;
  AccuracyReport sweep;
  Eigen::MatrixXd block;  // feature at the best alpha, one row per graph
};

FeatureSearchResult per_feature_alpha_search(const SpectralDataset& data, const FilterSpec& filter, int omega,
                                             const AlphaGrid& grid, const EvalConfig& cfg);

/// Same result as calling per_feature_alpha_search for each filter x power
/// pair (filter-major), but each F^alpha is formed once for all pairs.
std::vector<FeatureSearchResult> per_feature_alpha_search_all(const SpectralDataset& data,
                                                              std::span<const FilterSpec> filters,
                                                              std::span<const int> powers, const AlphaGrid& grid,
                                                              const EvalConfig& cfg);

struct Candidate {
  FeatureKey key;
  Eigen::MatrixXd block;  // one row per graph
};

std::vector<Candidate> candidates_from(std::vector<FeatureSearchResult> results);

struct ForwardResult {
  std::vector<std::size_t> selected;  // candidate indices in selection order
  std::vector<double> trace;          // accuracy after each addition, strictly increasing
  double accuracy() const { return trace.empty() ? 0.0 : trace.back(); }
};

/// Greedy forward selection. Starts from the best single candidate and keeps
/// adding the candidate with the highest combined accuracy while it strictly
/// improves. Ties go to the earlier candidate. Throws UsageError when empty.
ForwardResult forward_select(std::span<const Candidate> candidates, std::span<const int> labels,
                             const EvalConfig& cfg);

/// Concatenates candidate blocks in order and cross-validates them.
CvResult evaluate_all(std::span<const Candidate> candidates, std::span<const int> labels, const EvalConfig& cfg);

}  // namespace gefrfe
