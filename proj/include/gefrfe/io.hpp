#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gefrfe/graph.hpp"

namespace gefrfe {

enum class DatasetFormat { Tud, Gxl, Jsonl };

DatasetFormat parse_format(const std::string& text);
std::string format_name(DatasetFormat f);

/// Where a dataset lives and what it should contain.
struct DatasetManifest {
  std::string name;
  DatasetFormat format = DatasetFormat::Jsonl;
  std::filesystem::path root;                 // directory (tud, gxl) or file (jsonl)
  std::vector<std::string> split_files;       // gxl only: CXL index files under root
  std::optional<std::size_t> expected_graphs;
  std::optional<int> expected_classes;
};

/// Manifest for a known benchmark (NCI1, PROTEINS, IMDB-MULTI, Llow, Lmed,
/// Lhigh) rooted at `root`, with expected graph and class counts filled in.
/// Returns std::nullopt for unknown names.
std::optional<DatasetManifest> known_manifest(const std::string& name, const std::filesystem::path& root);

/// Reference statistics for the known benchmarks.
struct DatasetStats {
  std::string name;
  double mean_vertices;
  double mean_edges;
  std::size_t graphs;
  int classes;
};
std::span<const DatasetStats> reference_stats();

/// Counters for input cleanup done while parsing.
struct ParseReport {
  std::size_t self_loops_dropped = 0;
  std::size_t duplicate_edges_merged = 0;
};

/// TUDataset flat files `<name>_A.txt`, `<name>_graph_indicator.txt`,
/// `<name>_graph_labels.txt` (and optional `<name>_node_labels.txt`) under
/// `root` or `root/<name>`. Indices in the files are 1-based.
LabeledDataset parse_tudataset(const std::filesystem::path& root, const std::string& name,
                               ParseReport* report = nullptr);

/// One GXL graph. Node ids map to indices in order of appearance; `x`/`y`
/// float attributes are returned through `positions` when non-null.
Graph parse_gxl_graph(const std::filesystem::path& file, Eigen::MatrixXd* positions = nullptr,
                      ParseReport* report = nullptr);

/// Graphs listed in the CXL index files (`<print file=... class=...>`), in
/// file order. Class ids are assigned by sorted class name.
LabeledDataset parse_gxl_dataset(const std::filesystem::path& root, std::span<const std::string> split_files,
                                 ParseReport* report = nullptr);

/// One JSON object per line: {"n": N, "edges": [[u, v], ...], "label": c}.
/// Edges are 0-based. Blank lines are skipped.
LabeledDataset parse_jsonl(const std::filesystem::path& file);
void write_jsonl(const std::filesystem::path& file, const LabeledDataset& data);

/// Parses per manifest and checks the expected counts (DataError on mismatch).
LabeledDataset load_dataset(const DatasetManifest& manifest, ParseReport* report = nullptr);

}  // namespace gefrfe
