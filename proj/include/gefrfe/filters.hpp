#pragma once

#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "gefrfe/spectral.hpp"

namespace gefrfe {

inline constexpr double kDefaultPartSineRho = 0.579;

struct Heat {
  double t;
};
struct AntiHeat {
  double t;
};
struct PartSine {
  int r;
  double rho = kDefaultPartSineRho;
};
struct LambdaIdentity {};

/// A scalar function of the Laplacian eigenvalue.
///
/// Text form: `H<t>`, `AH<t>`, `PS<r>[:rho]`, `X`.
class FilterSpec {
 public:
  using Variant = std::variant<Heat, AntiHeat, PartSine, LambdaIdentity>;

  explicit FilterSpec(Variant v);

  static FilterSpec parse(std::string_view text);

  const Variant& variant() const { return variant_; }
  /// Stable short name, e.g. "H1", "AH3", "PS6", "PS6:0.5", "X".
  std::string name() const;
  bool needs_max_eigenvalue() const { return std::holds_alternative<AntiHeat>(variant_); }

 private:
  Variant variant_;
};

/// Comma-separated list of filter names. Throws UsageError on duplicates.
std::vector<FilterSpec> parse_filter_bank(std::string_view text);

/// The ten filters used throughout the experiments:
/// X, H1, H3, H6, AH1, AH3, AH6, PS1, PS6, PS11 (rho = 0.579).
std::vector<FilterSpec> default_filter_bank();

/// Responses H(lambda_l). `max_eigenvalue` is R for AntiHeat; it must be at
/// least the largest entry of `eigenvalues` (UsageError otherwise).
Eigen::VectorXd evaluate_filter(const FilterSpec& filter, const Eigen::VectorXd& eigenvalues,
                                double max_eigenvalue);

/// Same, with R taken as the largest eigenvalue in `eigenvalues`.
Eigen::VectorXd evaluate_filter(const FilterSpec& filter, const Eigen::VectorXd& eigenvalues);

/// K_t = V diag(exp(-lambda t)) V^T.
Eigen::MatrixXd heat_kernel_matrix(const SpectralDecomposition& dec, double t);

}  // namespace gefrfe
