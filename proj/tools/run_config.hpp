#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "gefrfe/embedding.hpp"
#include "gefrfe/evaluation.hpp"
#include "gefrfe/filters.hpp"
#include "gefrfe/io.hpp"
#include "gefrfe/selection.hpp"

namespace gefrfe::cli {

/// Flat key=value settings. Later sources override earlier ones.
class Settings {
 public:
  /// Reads `key = value` lines; `#` starts a comment. Unknown keys are a UsageError.
  void load_file(const std::filesystem::path& file);
  void set(const std::string& key, const std::string& value);

  std::optional<std::string> get(const std::string& key) const;
  std::string get_or(const std::string& key, const std::string& fallback) const;
  const std::map<std::string, std::string>& values() const { return values_; }

  static const std::vector<std::string>& known_keys();

 private:
  std::map<std::string, std::string> values_;
};

enum class AlphaMode { Fixed, Grid, PerFeature };

AlphaMode parse_alpha_mode(const std::string& text);
std::string alpha_mode_name(AlphaMode m);

/// "0..5" or "0,2,4".
std::vector<int> parse_powers(const std::string& text);

/// "H1-0@0.54,AH3-4@-1.2": filter, power and alpha per feature.
std::vector<FeatureSpec> parse_feature_list(const std::string& text);

struct RunConfig {
  DatasetManifest manifest;
  std::vector<FilterSpec> filters;
  std::vector<int> powers;
  std::vector<FeatureSpec> features;  // explicit list, overrides filters x powers when non-empty
  AlphaMode alpha_mode = AlphaMode::Fixed;
  double alpha = 1.0;
  double grid_lo = -3.0;
  double grid_hi = 3.0;
  double grid_step = 0.02;
  int grid_stride = 1;
  EvalConfig eval;
  std::optional<std::filesystem::path> cache_dir;
  std::optional<std::filesystem::path> out;
  std::optional<std::filesystem::path> json;
  int threads = 1;

  AlphaGrid grid() const;
  /// Features at a shared alpha: the explicit list (with its alphas replaced) or filters x powers.
  std::vector<FeatureSpec> shared_alpha_features(double a) const;
  nlohmann::ordered_json to_json() const;
};

/// Builds and validates a RunConfig. `default_mode` applies when alpha-mode is unset.
RunConfig resolve(const Settings& s, AlphaMode default_mode, bool needs_dataset = true);

/// Dataset description for a known benchmark name under data-dir, or a path with an explicit format.
DatasetManifest resolve_manifest(const Settings& s);

}  // namespace gefrfe::cli
