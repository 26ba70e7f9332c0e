#include <algorithm>
#include <map>
#include <set>
#include <string>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>

#include "gefrfe/errors.hpp"
#include "gefrfe/io.hpp"

namespace gefrfe {

namespace fs = std::filesystem;
namespace pt = boost::property_tree;

namespace {

pt::ptree read_xml_file(const fs::path& file) {
  if (!fs::exists(file)) throw DataError("cannot open " + file.string());
  pt::ptree tree;
  try {
    pt::read_xml(file.string(), tree, pt::xml_parser::trim_whitespace);
  } catch (const pt::xml_parser_error& e) {
    throw DataError(file.filename().string() + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  return tree;
}

std::string attribute(const pt::ptree& node, const std::string& name) {
  return node.get<std::string>("<xmlattr>." + name, "");
}

void collect_prints(const pt::ptree& tree, std::vector<const pt::ptree*>& out) {
  for (const auto& [tag, child] : tree) {
    if (tag == "print") {
      out.push_back(&child);
    } else if (tag != "<xmlattr>") {
      collect_prints(child, out);
    }
  }
}

}  // namespace

Graph parse_gxl_graph(const fs::path& file, Eigen::MatrixXd* positions, ParseReport* report) {
  const pt::ptree doc = read_xml_file(file);
  const auto graph = doc.get_child_optional("gxl.graph");
  if (!graph) throw DataError(file.filename().string() + ": no <gxl><graph> element");

  std::map<std::string, int> index;
  std::vector<std::pair<double, double>> xy;
  std::vector<std::pair<std::string, std::string>> raw_edges;
  for (const auto& [tag, child] : *graph) {
    if (tag == "node") {
      const std::string id = attribute(child, "id");
      if (id.empty()) throw DataError(file.filename().string() + ": node without id");
      if (!index.emplace(id, static_cast<int>(index.size())).second) {
        throw DataError(file.filename().string() + ": duplicate node id '" + id + "'");
      }
      double x = 0.0, y = 0.0;
      for (const auto& [atag, attr] : child) {
        if (atag != "attr") continue;
        const std::string name = attribute(attr, "name");
        if (name == "x") x = attr.get<double>("float", 0.0);
        if (name == "y") y = attr.get<double>("float", 0.0);
      }
      xy.emplace_back(x, y);
    } else if (tag == "edge") {
      raw_edges.emplace_back(attribute(child, "from"), attribute(child, "to"));
    }
  }
  if (index.empty()) throw DataError(file.filename().string() + ": graph has no nodes");

  ParseReport counts;
  std::set<std::pair<int, int>> edges;
  for (const auto& [from, to] : raw_edges) {
    auto a = index.find(from);
    auto b = index.find(to);
    if (a == index.end() || b == index.end()) {
      throw DataError(file.filename().string() + ": edge " + from + " -> " + to + " has a dangling endpoint");
    }
    if (a->second == b->second) {
      ++counts.self_loops_dropped;
      continue;
    }
    if (!edges.insert({std::min(a->second, b->second), std::max(a->second, b->second)}).second) {
      ++counts.duplicate_edges_merged;
    }
  }
  if (positions) {
    positions->resize(static_cast<Eigen::Index>(xy.size()), 2);
    for (std::size_t i = 0; i < xy.size(); ++i) {
      (*positions)(static_cast<Eigen::Index>(i), 0) = xy[i].first;
      (*positions)(static_cast<Eigen::Index>(i), 1) = xy[i].second;
    }
  }
  if (report) {
    report->self_loops_dropped += counts.self_loops_dropped;
    report->duplicate_edges_merged += counts.duplicate_edges_merged;
  }
  return Graph(static_cast<int>(index.size()), std::vector<std::pair<int, int>>(edges.begin(), edges.end()));
}

LabeledDataset parse_gxl_dataset(const fs::path& root, std::span<const std::string> split_files,
                                 ParseReport* report) {
  if (split_files.empty()) throw DataError("gxl dataset needs at least one CXL index file");
  std::vector<std::pair<std::string, std::string>> entries;  // (gxl file, class)
  for (const std::string& split : split_files) {
    const fs::path index_file = root / split;
    const pt::ptree doc = read_xml_file(index_file);
    std::vector<const pt::ptree*> prints;
    collect_prints(doc, prints);
    for (const pt::ptree* p : prints) {
      const std::string file = attribute(*p, "file");
      const std::string cls = attribute(*p, "class");
      if (file.empty()) throw DataError(index_file.filename().string() + ": <print> without file attribute");
      if (cls.empty()) throw DataError(index_file.filename().string() + ": " + file + " has no class attribute");
      entries.emplace_back(file, cls);
    }
  }
  if (entries.empty()) throw DataError(root.string() + ": index files list no graphs");

  std::set<std::string> class_set;
  for (const auto& e : entries) class_set.insert(e.second);
  LabeledDataset data;
  data.name = root.filename().string();
  data.class_names.assign(class_set.begin(), class_set.end());

  ParseReport counts;
  for (const auto& [file, cls] : entries) {
    Eigen::MatrixXd pos;
    data.graphs.push_back(parse_gxl_graph(root / file, &pos, &counts));
    data.node_attributes.push_back(std::move(pos));
    const auto it = std::lower_bound(data.class_names.begin(), data.class_names.end(), cls);
    data.labels.push_back(static_cast<int>(it - data.class_names.begin()));
  }
  if (report) *report = counts;
  data.validate();
  return data;
}

}  // namespace gefrfe
