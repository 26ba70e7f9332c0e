#include "run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include <omp.h>

#include "gefrfe/errors.hpp"

namespace gefrfe::cli {

namespace fs = std::filesystem;

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string::size_type start = 0;
  while (true) {
    const auto at = text.find(sep, start);
    out.push_back(trim(text.substr(start, at == std::string::npos ? std::string::npos : at - start)));
    if (at == std::string::npos) break;
    start = at + 1;
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& text) {
  T v{};
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, v);
  if (text.empty() || res.ec != std::errc() || res.ptr != end) {
    throw UsageError(key + ": cannot parse '" + text + "' as a number");
  }
  return v;
}

}  // namespace

const std::vector<std::string>& Settings::known_keys() {
  static const std::vector<std::string> keys{
      "dataset", "format",    "data-dir", "splits",  "filters",   "powers",   "features",
      "alpha",   "alpha-mode", "grid-lo", "grid-hi", "grid-step", "grid-stride", "neighbors",
      "folds",   "repeats",   "seed",     "cache-dir", "out",     "json",     "threads",
      "sizes",   "graphs-per-size", "edge-prob"};
  return keys;
}

void Settings::load_file(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw UsageError("cannot open config file " + file.string());
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (const auto hash = text.find('#'); hash != std::string::npos) text.erase(hash);
    text = trim(text);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw UsageError(file.filename().string() + ":" + std::to_string(line) + ": expected key = value");
    }
    try {
      set(trim(text.substr(0, eq)), trim(text.substr(eq + 1)));
    } catch (const UsageError& e) {
      throw UsageError(file.filename().string() + ":" + std::to_string(line) + ": " + e.what());
    }
  }
}

void Settings::set(const std::string& key, const std::string& value) {
  const auto& keys = known_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) throw UsageError("unknown setting '" + key + "'");
  values_[key] = value;
}

std::optional<std::string> Settings::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

std::string Settings::get_or(const std::string& key, const std::string& fallback) const {
  return get(key).value_or(fallback);
}

AlphaMode parse_alpha_mode(const std::string& text) {
  if (text == "fixed") return AlphaMode::Fixed;
  if (text == "grid") return AlphaMode::Grid;
  if (text == "per-feature") return AlphaMode::PerFeature;
  throw UsageError("alpha-mode must be fixed, grid or per-feature, got '" + text + "'");
}

std::string alpha_mode_name(AlphaMode m) {
  switch (m) {
    case AlphaMode::Fixed: return "fixed";
    case AlphaMode::Grid: return "grid";
    case AlphaMode::PerFeature: return "per-feature";
  }
  return "?";
}

std::vector<int> parse_powers(const std::string& text) {
  std::vector<int> out;
  if (const auto dots = text.find(".."); dots != std::string::npos) {
    const int lo = parse_number<int>("powers", trim(text.substr(0, dots)));
    const int hi = parse_number<int>("powers", trim(text.substr(dots + 2)));
    if (lo > hi) throw UsageError("powers: empty range '" + text + "'");
    for (int w = lo; w <= hi; ++w) out.push_back(w);
  } else {
    for (const std::string& part : split(text, ',')) out.push_back(parse_number<int>("powers", part));
  }
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (out[i] < 0) throw UsageError("powers must be non-negative");
    if (std::find(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(i), out[i]) != out.begin() + static_cast<std::ptrdiff_t>(i)) {
      throw UsageError("powers: duplicate entry " + std::to_string(out[i]));
    }
  }
  return out;
}

std::vector<FeatureSpec> parse_feature_list(const std::string& text) {
  std::vector<FeatureSpec> out;
  for (const std::string& item : split(text, ',')) {
    const auto at = item.find('@');
    if (at == std::string::npos) throw UsageError("feature '" + item + "' must look like FILTER-POWER@ALPHA");
    const std::string head = item.substr(0, at);
    const auto dash = head.rfind('-');
    if (dash == std::string::npos || dash == 0) {
      throw UsageError("feature '" + item + "' must look like FILTER-POWER@ALPHA");
    }
    const int omega = parse_number<int>("features", head.substr(dash + 1));
    if (omega < 0) throw UsageError("feature '" + item + "': power must be non-negative");
    out.push_back({FilterSpec::parse(head.substr(0, dash)), omega,
                   parse_number<double>("features", item.substr(at + 1))});
  }
  return out;
}

DatasetManifest resolve_manifest(const Settings& s) {
  const auto name = s.get("dataset");
  if (!name || name->empty()) throw UsageError("no dataset given (--dataset NAME or PATH)");
  const auto format = s.get("format");
  if (!format) {
    const fs::path dir = s.get_or("data-dir", "data");
    if (auto m = known_manifest(*name, dir)) return *m;
    if (fs::path(*name).extension() == ".jsonl") {
      DatasetManifest m;
      m.name = fs::path(*name).stem().string();
      m.format = DatasetFormat::Jsonl;
      m.root = *name;
      return m;
    }
    throw UsageError("unknown dataset '" + *name + "'; give --format for a path");
  }
  DatasetManifest m;
  m.format = parse_format(*format);
  const fs::path path(*name);
  switch (m.format) {
    case DatasetFormat::Jsonl:
      m.name = path.stem().string();
      m.root = path;
      break;
    case DatasetFormat::Tud:
      // <dir>/<NAME>/<NAME>_A.txt or <dir>/<NAME>_A.txt addressed as <dir>/<NAME>
      m.name = path.filename().string();
      m.root = fs::is_directory(path) ? path : path.parent_path();
      break;
    case DatasetFormat::Gxl: {
      m.name = path.filename().string();
      m.root = path;
      if (const auto splits = s.get("splits")) {
        m.split_files = split(*splits, ',');
      } else if (fs::is_directory(path)) {
        for (const auto& entry : fs::directory_iterator(path)) {
          if (entry.path().extension() == ".cxl") m.split_files.push_back(entry.path().filename().string());
        }
        std::sort(m.split_files.begin(), m.split_files.end());
      }
      break;
    }
  }
  return m;
}

AlphaGrid RunConfig::grid() const {
  AlphaGrid g(grid_lo, grid_hi, grid_step);
  return grid_stride > 1 ? g.thinned(grid_stride) : g;
}

std::vector<FeatureSpec> RunConfig::shared_alpha_features(double a) const {
  if (features.empty()) return feature_grid(filters, powers, a);
  std::vector<FeatureSpec> out = features;
  for (FeatureSpec& f : out) f.alpha = a;
  return out;
}

nlohmann::ordered_json RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["dataset"] = manifest.name;
  j["format"] = format_name(manifest.format);
  j["source"] = manifest.root.string();
  auto& names = j["filters"] = nlohmann::ordered_json::array();
  for (const FilterSpec& f : filters) names.push_back(f.name());
  j["powers"] = powers;
  if (!features.empty()) {
    auto& list = j["features"] = nlohmann::ordered_json::array();
    for (const FeatureSpec& f : features) list.push_back(f.key().label());
  }
  j["alpha_mode"] = alpha_mode_name(alpha_mode);
  j["alpha"] = alpha;
  j["grid"] = {{"lo", grid_lo}, {"hi", grid_hi}, {"step", grid_step}, {"stride", grid_stride}};
  j["eval"] = {{"neighbors", eval.neighbors}, {"folds", eval.folds}, {"repeats", eval.repeats}, {"seed", eval.seed}};
  return j;
}

RunConfig resolve(const Settings& s, AlphaMode default_mode, bool needs_dataset) {
  RunConfig c;
  if (needs_dataset) c.manifest = resolve_manifest(s);
  c.filters = s.get("filters") ? parse_filter_bank(*s.get("filters")) : default_filter_bank();
  c.powers = parse_powers(s.get_or("powers", "0..5"));
  if (const auto f = s.get("features")) c.features = parse_feature_list(*f);
  c.alpha_mode = s.get("alpha-mode") ? parse_alpha_mode(*s.get("alpha-mode")) : default_mode;
  c.alpha = parse_number<double>("alpha", s.get_or("alpha", "1"));
  c.grid_lo = parse_number<double>("grid-lo", s.get_or("grid-lo", "-3"));
  c.grid_hi = parse_number<double>("grid-hi", s.get_or("grid-hi", "3"));
  c.grid_step = parse_number<double>("grid-step", s.get_or("grid-step", "0.02"));
  c.grid_stride = parse_number<int>("grid-stride", s.get_or("grid-stride", "1"));
  c.eval.neighbors = parse_number<int>("neighbors", s.get_or("neighbors", "5"));
  c.eval.folds = parse_number<int>("folds", s.get_or("folds", "5"));
  c.eval.repeats = parse_number<int>("repeats", s.get_or("repeats", "20"));
  c.eval.seed = parse_number<std::uint64_t>("seed", s.get_or("seed", "0"));
  c.eval.validate();
  if (const auto d = s.get("cache-dir"); d && !d->empty()) c.cache_dir = *d;
  if (const auto o = s.get("out"); o && !o->empty() && *o != "-") c.out = *o;
  if (const auto j = s.get("json"); j && !j->empty()) c.json = *j;
  c.threads = parse_number<int>("threads", s.get_or("threads", std::to_string(omp_get_num_procs())));
  if (c.threads < 1) throw UsageError("threads must be >= 1");
  if (!std::isfinite(c.alpha)) throw UsageError("alpha must be finite");
  (void)c.grid();  // validates the grid parameters up front
  return c;
}

}  // namespace gefrfe::cli
