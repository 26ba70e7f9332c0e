#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace gefrfe {

/// kNN cross-validation protocol: k neighbours, `folds`-fold CV, averaged over `repeats` shuffles.
struct EvalConfig {
  int neighbors = 5;
  int folds = 5;
  int repeats = 20;
  std::uint64_t seed = 0;

  /// Throws UsageError unless neighbors >= 1, folds >= 2, repeats >= 1.
  void validate() const;
};

/// Majority label among the k nearest training rows (Euclidean).
///
/// Distance ties go to the lower row index. Vote ties go to the class of the
/// nearest neighbour when it is among the tied classes, else to the smallest
/// tied class id. Throws UsageError for an empty training set or k larger
/// than the number of rows.
int knn_predict(const Eigen::MatrixXd& train, std::span<const int> train_labels,
                const Eigen::VectorXd& query, int k);

/// Symmetric matrix of squared Euclidean distances between rows.
Eigen::MatrixXd pairwise_sq_distances(const Eigen::MatrixXd& rows);

/// Seed used for repeat `repeat` (splitmix64 of seed + repeat).
std::uint64_t repeat_seed(std::uint64_t seed, int repeat);

/// Shuffled split of 0..n-1 into `folds` contiguous chunks whose sizes differ by at most one.
std::vector<std::vector<std::size_t>> fold_partition(std::size_t n, int folds, std::uint64_t seed);

struct CvResult {
  double mean_accuracy = 0.0;
  std::vector<double> repeat_accuracies;  // mean over folds, per repeat
  std::vector<std::uint64_t> repeat_seeds;
};

/// Cross-validation from precomputed squared distances. Fold accuracies are
/// averaged uniformly. Repeats run in parallel and are reduced in order.
CvResult cross_validate_distances(const Eigen::MatrixXd& sq_distances, std::span<const int> labels,
                                  const EvalConfig& cfg);

CvResult cross_validate_detailed(const Eigen::MatrixXd& rows, std::span<const int> labels,
                                 const EvalConfig& cfg);

/// Mean accuracy. Throws UsageError when there are fewer samples than folds.
double cross_validate(const Eigen::MatrixXd& rows, std::span<const int> labels, const EvalConfig& cfg);

namespace serial {

Eigen::MatrixXd pairwise_sq_distances(const Eigen::MatrixXd& rows);
CvResult cross_validate_distances(const Eigen::MatrixXd& sq_distances, std::span<const int> labels,
                                  const EvalConfig& cfg);

}  // namespace serial

}  // namespace gefrfe
