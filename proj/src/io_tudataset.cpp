#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <string>
#include <system_error>

#include "gefrfe/errors.hpp"
#include "gefrfe/io.hpp"

namespace gefrfe {

namespace fs = std::filesystem;

namespace {

std::string where(const fs::path& file, std::size_t line) {
  return file.filename().string() + ":" + std::to_string(line);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

long long parse_int(std::string_view s, const fs::path& file, std::size_t line) {
  s = trim(s);
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw DataError(where(file, line) + ": expected an integer, got '" + std::string(s) + "'");
  }
  return v;
}

std::ifstream open(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw DataError("cannot open " + file.string());
  return in;
}

// One integer per non-empty line.
std::vector<long long> read_column(const fs::path& file) {
  std::ifstream in = open(file);
  std::vector<long long> out;
  std::string text;
  std::size_t line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (trim(text).empty()) continue;
    out.push_back(parse_int(text, file, line));
  }
  return out;
}

}  // namespace

LabeledDataset parse_tudataset(const fs::path& root, const std::string& name, ParseReport* report) {
  fs::path dir = root;
  if (!fs::exists(dir / (name + "_A.txt")) && fs::exists(root / name / (name + "_A.txt"))) dir = root / name;

  const fs::path edges_file = dir / (name + "_A.txt");
  const fs::path indicator_file = dir / (name + "_graph_indicator.txt");
  const fs::path labels_file = dir / (name + "_graph_labels.txt");
  const fs::path node_labels_file = dir / (name + "_node_labels.txt");

  const std::vector<long long> indicator = read_column(indicator_file);
  const std::vector<long long> graph_labels = read_column(labels_file);
  if (indicator.empty()) throw DataError(indicator_file.string() + ": no nodes");

  long long graph_count = 0;
  for (std::size_t i = 0; i < indicator.size(); ++i) {
    if (indicator[i] < 1) {
      throw DataError(where(indicator_file, i + 1) + ": graph ids are 1-based, got " + std::to_string(indicator[i]));
    }
    graph_count = std::max(graph_count, indicator[i]);
  }
  if (static_cast<long long>(graph_labels.size()) != graph_count) {
    throw DataError(labels_file.string() + ": " + std::to_string(graph_labels.size()) + " labels for " +
                    std::to_string(graph_count) + " graphs");
  }

  const auto g_count = static_cast<std::size_t>(graph_count);
  std::vector<int> sizes(g_count, 0);
  std::vector<int> local(indicator.size());
  for (std::size_t i = 0; i < indicator.size(); ++i) {
    local[i] = sizes[static_cast<std::size_t>(indicator[i] - 1)]++;
  }
  for (std::size_t g = 0; g < g_count; ++g) {
    if (sizes[g] == 0) throw DataError(indicator_file.string() + ": graph " + std::to_string(g + 1) + " has no nodes");
  }

  ParseReport counts;
  std::vector<std::set<std::pair<int, int>>> edge_sets(g_count);
  {
    std::ifstream in = open(edges_file);
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
      ++line;
      std::string_view row = trim(text);
      if (row.empty()) continue;
      const auto comma = row.find(',');
      if (comma == std::string_view::npos) {
        throw DataError(where(edges_file, line) + ": expected 'row, col'");
      }
      const long long a = parse_int(row.substr(0, comma), edges_file, line);
      const long long b = parse_int(row.substr(comma + 1), edges_file, line);
      for (long long node : {a, b}) {
        if (node < 1 || node > static_cast<long long>(indicator.size())) {
          throw DataError(where(edges_file, line) + ": node " + std::to_string(node) + " is not assigned to any graph");
        }
      }
      const long long ga = indicator[static_cast<std::size_t>(a - 1)];
      const long long gb = indicator[static_cast<std::size_t>(b - 1)];
      if (ga != gb) {
        throw DataError(where(edges_file, line) + ": edge (" + std::to_string(a) + ", " + std::to_string(b) +
                        ") crosses graphs " + std::to_string(ga) + " and " + std::to_string(gb));
      }
      if (a == b) {
        ++counts.self_loops_dropped;
        continue;
      }
      const int la = local[static_cast<std::size_t>(a - 1)];
      const int lb = local[static_cast<std::size_t>(b - 1)];
      if (!edge_sets[static_cast<std::size_t>(ga - 1)].insert({std::min(la, lb), std::max(la, lb)}).second) {
        ++counts.duplicate_edges_merged;
      }
    }
  }

  LabeledDataset data;
  data.name = name;
  data.graphs.reserve(g_count);
  for (std::size_t g = 0; g < g_count; ++g) {
    data.graphs.emplace_back(sizes[g], std::vector<std::pair<int, int>>(edge_sets[g].begin(), edge_sets[g].end()));
    data.labels.push_back(static_cast<int>(graph_labels[g]));
  }

  if (fs::exists(node_labels_file)) {
    const std::vector<long long> node_labels = read_column(node_labels_file);
    if (node_labels.size() != indicator.size()) {
      throw DataError(node_labels_file.string() + ": " + std::to_string(node_labels.size()) + " labels for " +
                      std::to_string(indicator.size()) + " nodes");
    }
    data.node_attributes.resize(g_count);
    for (std::size_t g = 0; g < g_count; ++g) data.node_attributes[g].resize(sizes[g], 1);
    for (std::size_t i = 0; i < indicator.size(); ++i) {
      data.node_attributes[static_cast<std::size_t>(indicator[i] - 1)](local[i], 0) =
          static_cast<double>(node_labels[i]);
    }
  }

  if (report) *report = counts;
  data.validate();
  return data;
}

}  // namespace gefrfe
