#include <filesystem>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <omp.h>

#include "commands.hpp"
#include "gefrfe/errors.hpp"

using namespace gefrfe;
using namespace gefrfe::cli;

namespace {

const std::map<std::string, std::string> kHelp{
    {"dataset", "known dataset name (NCI1, PROTEINS, IMDB-MULTI, Llow, Lmed, Lhigh) or a path"},
    {"format", "tud, gxl or jsonl when the dataset is given as a path"},
    {"data-dir", "root directory holding the known datasets (default: data)"},
    {"splits", "comma-separated CXL index files for gxl datasets"},
    {"filters", "filter bank, e.g. X,H1,AH3,PS6:0.579 (default: the ten standard filters)"},
    {"powers", "power orders as 0..5 or 0,2,4 (default 0..5)"},
    {"features", "explicit features FILTER-POWER@ALPHA, comma-separated"},
    {"alpha", "fractional order for alpha-mode fixed (default 1)"},
    {"alpha-mode", "fixed, grid (one shared alpha) or per-feature"},
    {"grid-lo", "alpha grid start (default -3)"},
    {"grid-hi", "alpha grid end (default 3)"},
    {"grid-step", "alpha grid step (default 0.02)"},
    {"grid-stride", "keep every n-th grid point counted from alpha = 1"},
    {"neighbors", "k for kNN (default 5)"},
    {"folds", "cross-validation folds (default 5)"},
    {"repeats", "cross-validation repeats (default 20)"},
    {"seed", "random seed (default 0)"},
    {"cache-dir", "directory for cached decompositions"},
    {"out", "CSV output file (default: standard output)"},
    {"json", "JSON report file (default: <out>.json when --out is given)"},
    {"threads", "worker threads (default: available cores); results do not depend on it"},
    {"sizes", "graph sizes for bench-scaling (default 16,32,64,128)"},
    {"graphs-per-size", "graphs per size for bench-scaling (default 5)"},
    {"edge-prob", "edge probability for bench-scaling graphs (default 0.3)"},
};

const std::vector<std::string> kDatasetKeys{"dataset", "format", "data-dir", "splits"};
const std::vector<std::string> kPipelineKeys{"filters",  "powers",    "features",  "alpha",     "alpha-mode",
                                             "grid-lo",  "grid-hi",   "grid-step", "grid-stride", "neighbors",
                                             "folds",    "repeats",   "seed",      "cache-dir", "out",
                                             "json",     "threads"};

struct Bound {
  std::map<std::string, std::string> values;
  std::vector<std::pair<std::string, CLI::Option*>> options;

  void add(CLI::App* app, const std::vector<std::string>& keys) {
    for (const std::string& key : keys) {
      CLI::Option* opt = key == "dataset" ? app->add_option("--dataset,dataset", values[key], kHelp.at(key))
                                          : app->add_option("--" + key, values[key], kHelp.at(key));
      options.emplace_back(key, opt);
    }
  }
  void apply(Settings& s) const {
    for (const auto& [key, opt] : options) {
      if (opt->count() > 0) s.set(key, values.at(key));
    }
  }
};

std::vector<int> parse_sizes(const std::string& text) {
  std::vector<int> out;
  std::string item;
  for (char c : text + ",") {
    if (c != ',') {
      item += c;
      continue;
    }
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("sizes: cannot parse '" + item + "'");
    }
    item.clear();
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"gefrfe: fractional spectral graph embeddings and kNN evaluation"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_file;
  bool quiet = false;
  app.add_option("--config", config_file, "key = value configuration file; flags override it");
  app.add_flag("-q,--quiet", quiet, "no progress output on standard error");

  std::map<std::string, Bound> bound;
  auto* info = app.add_subcommand("info", "dataset summary: graphs, classes, mean vertices and edges");
  bound["info"].add(info, kDatasetKeys);
  bound["info"].add(info, {"json"});

  FetchOptions fetch_opt;
  auto* fetch = app.add_subcommand("fetch", "print dataset sources, verify archive checksums and parsed counts");
  fetch->add_option("dataset", fetch_opt.dataset, "known dataset name")->required();
  fetch->add_option("--data-dir", fetch_opt.data_dir, kHelp.at("data-dir"));
  fetch->add_option("--archive", fetch_opt.archive, "downloaded archive to checksum");
  fetch->add_option("--sha256", fetch_opt.sha256, "expected SHA-256 of the archive");

  const std::vector<std::pair<std::string, std::string>> pipeline{
      {"embed", "write the embedding matrix as CSV"},
      {"gridsearch", "cross-validated accuracy over the alpha grid"},
      {"forward", "greedy forward feature selection"},
      {"evaluate", "cross-validated accuracy of all features together"},
  };
  for (const auto& [name, help] : pipeline) {
    auto* sub = app.add_subcommand(name, help);
    bound[name].add(sub, kDatasetKeys);
    bound[name].add(sub, kPipelineKeys);
  }
  auto* scaling = app.add_subcommand("bench-scaling", "per-graph embedding time against graph size");
  bound["bench-scaling"].add(scaling, {"filters", "powers", "features", "alpha", "seed", "out", "json", "sizes",
                                       "graphs-per-size", "edge-prob"});

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  const Log log(quiet);
  try {
    CLI::App* sub = app.get_subcommands().front();
    const std::string name = sub->get_name();
    if (name == "fetch") return cmd_fetch(fetch_opt, log);

    Settings settings;
    if (!config_file.empty()) settings.load_file(config_file);
    bound.at(name).apply(settings);

    if (name == "bench-scaling") {
      if (!settings.get("alpha")) settings.set("alpha", "0.5");
      const RunConfig cfg = resolve(settings, AlphaMode::Fixed, false);
      ScalingOptions opt;
      if (const auto v = settings.get("sizes")) opt.sizes = parse_sizes(*v);
      if (const auto v = settings.get("graphs-per-size")) opt.graphs_per_size = parse_sizes(*v).at(0);
      if (const auto v = settings.get("edge-prob")) {
        try {
          opt.edge_prob = std::stod(*v);
        } catch (const std::exception&) {
          throw UsageError("edge-prob: cannot parse '" + *v + "'");
        }
      }
      return cmd_bench_scaling(cfg, opt, log);
    }

    const AlphaMode mode = name == "gridsearch" ? AlphaMode::Grid
                           : name == "forward" || name == "evaluate" ? AlphaMode::PerFeature
                                                                     : AlphaMode::Fixed;
    const RunConfig cfg = resolve(settings, mode, true);
    omp_set_num_threads(cfg.threads);
    if (name == "info") return cmd_info(cfg, log);
    if (name == "embed") return cmd_embed(cfg, log);
    if (name == "gridsearch") return cmd_gridsearch(cfg, log);
    if (name == "forward") return cmd_forward(cfg, log);
    if (name == "evaluate") return cmd_evaluate(cfg, log);
    throw UsageError("unknown subcommand " + name);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "data error: " << e.what() << '\n';
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  }
}
