#include "commands.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <omp.h>
#include <sodium.h>

#include "gefrfe/cache.hpp"
#include "gefrfe/errors.hpp"
#include "gefrfe/pipeline.hpp"
#include "gefrfe/scaling.hpp"

namespace gefrfe::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

std::string num(double x) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <class F>
auto stage(const std::string& name, F&& fn) {
  try {
    return fn();
  } catch (const UsageError& e) {
    throw UsageError(name + ": " + e.what());
  } catch (const DataError& e) {
    throw DataError(name + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(name + ": " + e.what());
  }
}

void write_output(const std::optional<fs::path>& path, const std::string& text) {
  if (!path) {
    std::cout << text;
    std::cout.flush();
    return;
  }
  if (path->has_parent_path()) fs::create_directories(path->parent_path());
  std::ofstream out(*path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path->string());
  out << text;
  if (!out) throw DataError("failed writing " + path->string());
}

void write_json(const std::optional<fs::path>& path, const ojson& j) {
  if (path) write_output(path, j.dump(2) + "\n");
}

/// JSON report path: --json, else <out>.json next to a CSV output.
std::optional<fs::path> report_path(const RunConfig& cfg) {
  if (cfg.json) return cfg.json;
  if (cfg.out) return fs::path(cfg.out->string() + ".json");
  return std::nullopt;
}

LabeledDataset load(const RunConfig& cfg, const Log& log) {
  ParseReport report;
  LabeledDataset data = stage("parse", [&] { return load_dataset(cfg.manifest, &report); });
  log("parsed " + data.name + ": " + std::to_string(data.size()) + " graphs");
  if (report.self_loops_dropped || report.duplicate_edges_merged) {
    log("dropped " + std::to_string(report.self_loops_dropped) + " self-loops, merged " +
        std::to_string(report.duplicate_edges_merged) + " duplicate edges");
  }
  return data;
}

SpectralDataset spectra(const RunConfig& cfg, const LabeledDataset& data, const Log& log) {
  return stage("spectra", [&] {
    if (!cfg.cache_dir) {
      SpectralDataset s = prepare(data);
      log("decomposed " + std::to_string(s.size()) + " graphs");
      return s;
    }
    DecompositionCache cache(*cfg.cache_dir);
    SpectralDataset s = prepare(data, &cache);
    log("spectra: " + std::to_string(cache.hits()) + " cached, " + std::to_string(cache.misses()) + " computed, " +
        std::to_string(cache.rejected()) + " rejected");
    return s;
  });
}

ojson cv_json(const CvResult& cv) {
  ojson j;
  j["accuracy"] = cv.mean_accuracy;
  j["repeat_accuracies"] = cv.repeat_accuracies;
  return j;
}

ojson key_json(const FeatureKey& k) {
  return ojson{{"label", k.label()}, {"filter", k.filter}, {"omega", k.omega}, {"alpha", k.alpha}};
}

std::vector<FeatureSearchResult> per_feature(const RunConfig& cfg, const SpectralDataset& s, const Log& log) {
  const AlphaGrid grid = cfg.grid();
  log("per-feature alpha search over " + std::to_string(grid.size()) + " grid points");
  if (cfg.features.empty()) {
    return stage("search", [&] { return per_feature_alpha_search_all(s, cfg.filters, cfg.powers, grid, cfg.eval); });
  }
  return stage("search", [&] {
    std::vector<FeatureSearchResult> out;
    for (const FeatureSpec& f : cfg.features) out.push_back(per_feature_alpha_search(s, f.filter, f.omega, grid, cfg.eval));
    return out;
  });
}

std::vector<Candidate> fixed_candidates(const std::vector<FeatureSpec>& specs, const SpectralDataset& s) {
  const EmbeddingMatrix m = stage("embed", [&] { return embed(s, specs); });
  std::vector<Candidate> out;
  for (std::size_t b = 0; b < m.blocks.size(); ++b) out.push_back({m.blocks[b], m.block(b)});
  return out;
}

}  // namespace

void Log::operator()(const std::string& msg) const {
  if (quiet_) return;
  const double t = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  char stamp[32];
  std::snprintf(stamp, sizeof stamp, "[%8.2fs] ", t);
  std::cerr << stamp << msg << '\n';
}

int cmd_info(const RunConfig& cfg, const Log& log) {
  const LabeledDataset data = load(cfg, log);
  std::cout << data.name << ": " << data.size() << " graphs, " << data.class_count() << " classes, mean vertices "
            << num(data.mean_vertices()) << ", mean edges " << num(data.mean_edges()) << "\n";
  ojson j;
  j["dataset"] = data.name;
  j["graphs"] = data.size();
  j["classes"] = data.class_count();
  j["mean_vertices"] = data.mean_vertices();
  j["mean_edges"] = data.mean_edges();
  j["max_nodes"] = data.max_nodes();
  for (const DatasetStats& ref : reference_stats()) {
    if (ref.name != data.name) continue;
    std::cout << "reference: " << ref.graphs << " graphs, " << ref.classes << " classes, mean vertices "
              << num(ref.mean_vertices) << ", mean edges " << num(ref.mean_edges) << "\n";
    j["reference"] = {{"graphs", ref.graphs},
                      {"classes", ref.classes},
                      {"mean_vertices", ref.mean_vertices},
                      {"mean_edges", ref.mean_edges}};
  }
  write_json(cfg.json, j);
  return 0;
}

int cmd_fetch(const FetchOptions& opt, const Log& log) {
  const fs::path dir = opt.data_dir.empty() ? fs::path("data") : fs::path(opt.data_dir);
  const auto manifest = known_manifest(opt.dataset, dir);
  if (!manifest) throw UsageError("fetch: unknown dataset '" + opt.dataset + "'");
  if (manifest->format == DatasetFormat::Tud) {
    std::cout << "source: https://www.chrsmrrs.com/graphkerneldatasets/" << opt.dataset << ".zip\n"
              << "layout: unzip into " << dir.string() << " so that " << (dir / opt.dataset).string() << "/"
              << opt.dataset << "_A.txt exists\n";
  } else {
    std::cout << "source: IAM Graph Database (Letter), https://fki.tic.heia-fr.ch/databases/iam-graph-database\n"
              << "layout: unpack so that " << (manifest->root / "train.cxl").string() << " exists\n";
  }

  if (!opt.archive.empty()) {
    if (sodium_init() < 0) throw NumericError("libsodium initialisation failed");
    std::ifstream in(opt.archive, std::ios::binary);
    if (!in) throw DataError("cannot open archive " + opt.archive);
    crypto_hash_sha256_state st;
    crypto_hash_sha256_init(&st);
    std::vector<char> buf(1 << 16);
    while (in) {
      in.read(buf.data(), static_cast<std::streamsize>(buf.size()));
      crypto_hash_sha256_update(&st, reinterpret_cast<const unsigned char*>(buf.data()),
                                static_cast<unsigned long long>(in.gcount()));
    }
    unsigned char digest[crypto_hash_sha256_BYTES];
    crypto_hash_sha256_final(&st, digest);
    char hex[2 * crypto_hash_sha256_BYTES + 1];
    sodium_bin2hex(hex, sizeof hex, digest, sizeof digest);
    std::cout << "sha256: " << hex << "\n";
    if (!opt.sha256.empty() && opt.sha256 != hex) {
      throw DataError("checksum mismatch for " + opt.archive + ": expected " + opt.sha256);
    }
  } else if (!opt.sha256.empty()) {
    throw UsageError("fetch: --sha256 needs --archive");
  }

  if (manifest->format == DatasetFormat::Tud ? fs::exists(dir / opt.dataset) || fs::exists(dir / (opt.dataset + "_A.txt"))
                                             : fs::exists(manifest->root)) {
    const LabeledDataset data = stage("parse", [&] { return load_dataset(*manifest); });
    log("verified " + data.name);
    std::cout << "verified: " << data.size() << " graphs, " << data.class_count() << " classes\n";
  } else {
    std::cout << "status: not present under " << dir.string() << "\n";
  }
  return 0;
}

int cmd_embed(const RunConfig& cfg, const Log& log) {
  if (cfg.alpha_mode != AlphaMode::Fixed) throw UsageError("embed needs a fixed alpha or an explicit feature list");
  const LabeledDataset data = load(cfg, log);
  const SpectralDataset s = spectra(cfg, data, log);
  const std::vector<FeatureSpec> specs = cfg.features.empty() ? feature_grid(cfg.filters, cfg.powers, cfg.alpha)
                                                              : cfg.features;
  const EmbeddingMatrix m = stage("embed", [&] { return embed(s, specs); });
  log("embedded " + std::to_string(m.rows.rows()) + " x " + std::to_string(m.rows.cols()));

  std::ostringstream csv;
  csv << "graph,label";
  for (const std::string& c : m.column_names()) csv << ',' << c;
  csv << '\n';
  for (Eigen::Index i = 0; i < m.rows.rows(); ++i) {
    csv << i << ',' << data.labels[static_cast<std::size_t>(i)];
    for (Eigen::Index c = 0; c < m.rows.cols(); ++c) csv << ',' << num(m.rows(i, c));
    csv << '\n';
  }
  write_output(cfg.out, csv.str());

  ojson j;
  j["command"] = "embed";
  j["config"] = cfg.to_json();
  j["graphs"] = m.rows.rows();
  j["padded_nodes"] = m.padded_nodes;
  auto& blocks = j["blocks"] = ojson::array();
  for (std::size_t b = 0; b < m.blocks.size(); ++b) {
    ojson k = key_json(m.blocks[b]);
    k["first_column"] = static_cast<Eigen::Index>(b) * m.block_width();
    k["columns"] = m.block_width();
    blocks.push_back(k);
  }
  write_json(report_path(cfg), j);
  return 0;
}

int cmd_gridsearch(const RunConfig& cfg, const Log& log) {
  const LabeledDataset data = load(cfg, log);
  const SpectralDataset s = spectra(cfg, data, log);
  ojson j;
  j["command"] = "gridsearch";
  j["config"] = cfg.to_json();
  std::ostringstream csv;

  if (cfg.alpha_mode == AlphaMode::PerFeature) {
    const auto results = per_feature(cfg, s, log);
    csv << "feature,alpha,accuracy\n";
    auto& list = j["features"] = ojson::array();
    for (const FeatureSearchResult& r : results) {
      for (std::size_t i = 0; i < r.sweep.alphas.size(); ++i) {
        csv << r.key.short_label() << ',' << num(r.sweep.alphas[i]) << ',' << num(r.sweep.accuracies[i]) << '\n';
      }
      list.push_back({{"feature", r.key.short_label()},
                      {"best_alpha", r.key.alpha},
                      {"best_accuracy", r.best_accuracy},
                      {"accuracy_at_1", r.sweep.accuracy_at(1.0)}});
    }
  } else {
    const AlphaGrid grid = cfg.alpha_mode == AlphaMode::Fixed ? AlphaGrid(std::vector<double>{1.0}) : cfg.grid();
    if (cfg.alpha_mode == AlphaMode::Fixed && cfg.alpha != 1.0) {
      throw UsageError("gridsearch with a fixed alpha only supports alpha = 1; use --alpha-mode grid");
    }
    log("shared-alpha search over " + std::to_string(grid.size()) + " grid points");
    const AccuracyReport r = stage("search", [&] {
      if (!cfg.features.empty()) {
        // explicit features: embed the list at each shared alpha
        AccuracyReport rep;
        bool first = true;
        for (double a : grid.points()) {
          const auto specs = cfg.shared_alpha_features(a);
          CvResult cv = cross_validate_detailed(embed(s, specs).rows, s.labels, cfg.eval);
          rep.alphas.push_back(a);
          rep.accuracies.push_back(cv.mean_accuracy);
          if (first || better_alpha(a, cv.mean_accuracy, rep.best_alpha, rep.best_accuracy)) {
            rep.best_alpha = a;
            rep.best_accuracy = cv.mean_accuracy;
            first = false;
          }
          rep.details.push_back(std::move(cv));
        }
        return rep;
      }
      return grid_search_alpha(s, cfg.filters, cfg.powers, grid, cfg.eval);
    });
    csv << "alpha,accuracy\n";
    for (std::size_t i = 0; i < r.alphas.size(); ++i) csv << num(r.alphas[i]) << ',' << num(r.accuracies[i]) << '\n';
    j["best_alpha"] = r.best_alpha;
    j["best_accuracy"] = r.best_accuracy;
    j["accuracy_at_1"] = r.accuracy_at(1.0);
    log("best alpha " + num(r.best_alpha) + " accuracy " + num(r.best_accuracy) + " (alpha = 1: " +
        num(r.accuracy_at(1.0)) + ")");
  }
  write_output(cfg.out, csv.str());
  write_json(report_path(cfg), j);
  return 0;
}

int cmd_forward(const RunConfig& cfg, const Log& log) {
  const LabeledDataset data = load(cfg, log);
  const SpectralDataset s = spectra(cfg, data, log);
  std::vector<Candidate> candidates;
  std::vector<double> single;
  switch (cfg.alpha_mode) {
    case AlphaMode::Fixed: {
      const auto specs = cfg.features.empty() ? feature_grid(cfg.filters, cfg.powers, cfg.alpha) : cfg.features;
      candidates = fixed_candidates(specs, s);
      break;
    }
    case AlphaMode::Grid: {
      const AlphaGrid grid = cfg.grid();
      const AccuracyReport r = stage("search", [&] { return grid_search_alpha(s, cfg.filters, cfg.powers, grid, cfg.eval); });
      log("shared best alpha " + num(r.best_alpha));
      candidates = fixed_candidates(cfg.shared_alpha_features(r.best_alpha), s);
      break;
    }
    case AlphaMode::PerFeature: {
      auto results = per_feature(cfg, s, log);
      for (const FeatureSearchResult& r : results) single.push_back(r.best_accuracy);
      candidates = candidates_from(std::move(results));
      break;
    }
  }
  log("forward selection over " + std::to_string(candidates.size()) + " candidates");
  const ForwardResult fr = stage("select", [&] { return forward_select(candidates, s.labels, cfg.eval); });

  std::ostringstream table;
  table << "step,feature,filter,omega,alpha,accuracy\n";
  ojson j;
  j["command"] = "forward";
  j["config"] = cfg.to_json();
  auto& sel = j["selected"] = ojson::array();
  for (std::size_t i = 0; i < fr.selected.size(); ++i) {
    const FeatureKey& k = candidates[fr.selected[i]].key;
    table << i + 1 << ',' << k.short_label() << ',' << k.filter << ',' << k.omega << ',' << num(k.alpha) << ','
          << num(fr.trace[i]) << '\n';
    ojson e = key_json(k);
    e["accuracy"] = fr.trace[i];
    sel.push_back(e);
  }
  j["trace"] = fr.trace;
  j["accuracy"] = fr.accuracy();
  if (!single.empty()) {
    auto& cand = j["candidates"] = ojson::array();
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      ojson e = key_json(candidates[c].key);
      e["accuracy"] = single[c];
      cand.push_back(e);
    }
  }
  write_output(cfg.out, table.str());
  write_json(report_path(cfg), j);
  log("forward accuracy " + num(fr.accuracy()) + " with " + std::to_string(fr.selected.size()) + " features");
  return 0;
}

int cmd_evaluate(const RunConfig& cfg, const Log& log) {
  const LabeledDataset data = load(cfg, log);
  const SpectralDataset s = spectra(cfg, data, log);
  std::vector<Candidate> candidates;
  ojson j;
  j["command"] = "evaluate";
  j["config"] = cfg.to_json();
  switch (cfg.alpha_mode) {
    case AlphaMode::Fixed:
      candidates = fixed_candidates(cfg.features.empty() ? feature_grid(cfg.filters, cfg.powers, cfg.alpha)
                                                         : cfg.features,
                                    s);
      break;
    case AlphaMode::Grid: {
      const AlphaGrid grid = cfg.grid();
      const AccuracyReport r = stage("search", [&] { return grid_search_alpha(s, cfg.filters, cfg.powers, grid, cfg.eval); });
      j["shared_alpha"] = r.best_alpha;
      candidates = fixed_candidates(cfg.shared_alpha_features(r.best_alpha), s);
      break;
    }
    case AlphaMode::PerFeature:
      candidates = candidates_from(per_feature(cfg, s, log));
      break;
  }
  const CvResult cv = stage("evaluate", [&] { return evaluate_all(candidates, s.labels, cfg.eval); });
  auto& feats = j["features"] = ojson::array();
  for (const Candidate& c : candidates) feats.push_back(c.key.label());
  j["result"] = cv_json(cv);
  std::ostringstream csv;
  csv << "repeat,seed,accuracy\n";
  for (std::size_t r = 0; r < cv.repeat_accuracies.size(); ++r) {
    csv << r << ',' << cv.repeat_seeds[r] << ',' << num(cv.repeat_accuracies[r]) << '\n';
  }
  if (cfg.out) write_output(cfg.out, csv.str());
  std::cout << "accuracy " << num(cv.mean_accuracy) << "\n";
  write_json(report_path(cfg), j);
  return 0;
}

int cmd_bench_scaling(const RunConfig& cfg, const ScalingOptions& opt, const Log& log) {
  const std::vector<FeatureSpec> specs =
      cfg.features.empty() ? feature_grid(cfg.filters, cfg.powers, cfg.alpha) : cfg.features;
  omp_set_num_threads(1);
  const auto points = stage("bench", [&] {
    return measure_embedding_scaling(opt.sizes, opt.graphs_per_size, opt.edge_prob, specs, cfg.eval.seed);
  });
  std::ostringstream csv;
  csv << "nodes,seconds_per_graph\n";
  for (const ScalingPoint& p : points) csv << p.nodes << ',' << num(p.seconds_per_graph) << '\n';
  write_output(cfg.out, csv.str());
  const double slope = loglog_slope(points);
  log("log-log slope " + num(slope));
  ojson j;
  j["command"] = "bench-scaling";
  j["config"] = cfg.to_json();
  j["sizes"] = opt.sizes;
  j["graphs_per_size"] = opt.graphs_per_size;
  j["edge_prob"] = opt.edge_prob;
  auto& pts = j["points"] = ojson::array();
  for (const ScalingPoint& p : points) pts.push_back({{"nodes", p.nodes}, {"seconds_per_graph", p.seconds_per_graph}});
  j["slope"] = slope;
  write_json(report_path(cfg), j);
  return 0;
}

}  // namespace gefrfe::cli
