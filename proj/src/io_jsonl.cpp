#include <array>
#include <fstream>
#include <string>

#include <nlohmann/json.hpp>

#include "gefrfe/errors.hpp"
#include "gefrfe/io.hpp"

namespace gefrfe {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::array<DatasetStats, 6> kReferenceStats{{
    {"Llow", 4.68, 3.13, 2250, 15},
    {"Lmed", 4.67, 3.21, 2250, 15},
    {"Lhigh", 4.67, 4.50, 2250, 15},
    {"PROTEINS", 39.06, 72.82, 1113, 2},
    {"IMDB-MULTI", 13.00, 65.98, 1500, 3},
    {"NCI1", 29.87, 32.30, 4110, 2},
}};

}  // namespace

std::span<const DatasetStats> reference_stats() { return kReferenceStats; }

DatasetFormat parse_format(const std::string& text) {
  if (text == "tud") return DatasetFormat::Tud;
  if (text == "gxl") return DatasetFormat::Gxl;
  if (text == "jsonl") return DatasetFormat::Jsonl;
  throw UsageError("unknown dataset format '" + text + "' (expected tud, gxl or jsonl)");
}

std::string format_name(DatasetFormat f) {
  switch (f) {
    case DatasetFormat::Tud: return "tud";
    case DatasetFormat::Gxl: return "gxl";
    case DatasetFormat::Jsonl: return "jsonl";
  }
  return "?";
}

std::optional<DatasetManifest> known_manifest(const std::string& name, const fs::path& root) {
  const DatasetStats* stats = nullptr;
  for (const DatasetStats& s : kReferenceStats) {
    if (s.name == name) stats = &s;
  }
  if (!stats) return std::nullopt;
  DatasetManifest m;
  m.name = name;
  m.expected_graphs = stats->graphs;
  m.expected_classes = stats->classes;
  if (name.front() == 'L') {
    const std::string level = name == "Llow" ? "LOW" : name == "Lmed" ? "MED" : "HIGH";
    m.format = DatasetFormat::Gxl;
    m.root = fs::exists(root / "Letter" / level) ? root / "Letter" / level : root / level;
    m.split_files = {"train.cxl", "validation.cxl", "test.cxl"};
  } else {
    m.format = DatasetFormat::Tud;
    m.root = root;
  }
  return m;
}

LabeledDataset parse_jsonl(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open " + file.string());
  LabeledDataset data;
  data.name = file.stem().string();
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string at = file.filename().string() + ":" + std::to_string(line) + ": ";
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw DataError(at + "invalid JSON (" + e.what() + ")");
    }
    if (!obj.is_object()) throw DataError(at + "expected an object");
    if (!obj.contains("n") || !obj["n"].is_number_integer()) throw DataError(at + "missing integer field 'n'");
    if (!obj.contains("edges") || !obj["edges"].is_array()) throw DataError(at + "missing array field 'edges'");
    if (!obj.contains("label") || !obj["label"].is_number_integer()) {
      throw DataError(at + "missing integer field 'label'");
    }
    std::vector<std::pair<int, int>> edges;
    for (const json& e : obj["edges"]) {
      if (!e.is_array()) throw DataError(at + "edge is not an array");
      if (e.size() == 3) throw DataError(at + "weighted edges are not supported");
      if (e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer()) {
        throw DataError(at + "edge must be a pair of integers");
      }
      edges.emplace_back(e[0].get<int>(), e[1].get<int>());
    }
    try {
      data.graphs.emplace_back(obj["n"].get<int>(), edges);
    } catch (const DataError& e) {
      throw DataError(at + e.what());
    }
    data.labels.push_back(obj["label"].get<int>());
  }
  if (data.graphs.empty()) throw DataError(file.string() + ": no graphs");
  return data;
}

void write_jsonl(const fs::path& file, const LabeledDataset& data) {
  data.validate();
  std::ofstream out(file);
  if (!out) throw DataError("cannot write " + file.string());
  for (std::size_t i = 0; i < data.graphs.size(); ++i) {
    nlohmann::ordered_json obj;
    obj["n"] = data.graphs[i].node_count();
    json edges = json::array();
    for (const Edge& e : data.graphs[i].edges()) edges.push_back({e.u, e.v});
    obj["edges"] = edges;
    obj["label"] = data.labels[i];
    out << obj.dump() << '\n';
  }
}

LabeledDataset load_dataset(const DatasetManifest& manifest, ParseReport* report) {
  LabeledDataset data;
  switch (manifest.format) {
    case DatasetFormat::Tud: data = parse_tudataset(manifest.root, manifest.name, report); break;
    case DatasetFormat::Gxl: data = parse_gxl_dataset(manifest.root, manifest.split_files, report); break;
    case DatasetFormat::Jsonl: data = parse_jsonl(manifest.root); break;
  }
  if (!manifest.name.empty()) data.name = manifest.name;
  if (manifest.expected_graphs && data.size() != *manifest.expected_graphs) {
    throw DataError(data.name + ": parsed " + std::to_string(data.size()) + " graphs, expected " +
                    std::to_string(*manifest.expected_graphs));
  }
  if (manifest.expected_classes && data.class_count() != *manifest.expected_classes) {
    throw DataError(data.name + ": parsed " + std::to_string(data.class_count()) + " classes, expected " +
                    std::to_string(*manifest.expected_classes));
  }
  return data;
}

}  // namespace gefrfe
