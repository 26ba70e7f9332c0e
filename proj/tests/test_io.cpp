#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <random>
#include <string>

#include "gefrfe/errors.hpp"
#include "gefrfe/io.hpp"
#include "support/oracles.hpp"

using namespace gefrfe;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    std::random_device rd;
    path = fs::temp_directory_path() / ("gefrfe_io_" + std::to_string(rd()) + std::to_string(rd()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  void write(const std::string& name, const std::string& text) const {
    fs::create_directories((path / name).parent_path());
    std::ofstream(path / name) << text;
  }
};

std::string error_of(auto&& fn) {
  try {
    fn();
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

void write_tud(const TempDir& dir, const std::string& a, const std::string& indicator, const std::string& labels) {
  dir.write("T_A.txt", a);
  dir.write("T_graph_indicator.txt", indicator);
  dir.write("T_graph_labels.txt", labels);
}

const char* kP3Gxl = R"(<?xml version="1.0"?>
<gxl>
  <graph id="g" edgeids="false" edgemode="undirected">
    <node id="a"><attr name="x"><float>0.5</float></attr><attr name="y"><float>1.5</float></attr></node>
    <node id="b"><attr name="x"><float>1.0</float></attr><attr name="y"><float>2.0</float></attr></node>
    <node id="c"><attr name="x"><float>2.0</float></attr><attr name="y"><float>0.0</float></attr></node>
    <edge from="a" to="b"/>
    <edge from="c" to="b"/>
  </graph>
</gxl>
)";

}  // namespace

TEST_CASE("TU dataset: two nodes, one edge") {
  TempDir dir;
  write_tud(dir, "1, 2\n2, 1\n", "1\n1\n", "1\n");
  ParseReport report;
  const LabeledDataset d = parse_tudataset(dir.path, "T", &report);
  REQUIRE(d.size() == 1);
  CHECK(d.graphs[0].node_count() == 2);
  REQUIRE(d.graphs[0].edge_count() == 1);
  CHECK(d.graphs[0].edges()[0] == Edge{0, 1});
  CHECK(d.labels == std::vector<int>{1});
  CHECK(report.duplicate_edges_merged == 1);
  CHECK(report.self_loops_dropped == 0);
}

TEST_CASE("TU dataset: several graphs, subdirectory, node labels, self-loops") {
  TempDir dir;
  dir.write("T/T_A.txt", "1,2\n2,3\n3,3\n4,5\n5,4\n");
  dir.write("T/T_graph_indicator.txt", "1\n1\n1\n2\n2\n");
  dir.write("T/T_graph_labels.txt", "-1\n1\n");
  dir.write("T/T_node_labels.txt", "7\n8\n9\n1\n2\n");
  ParseReport report;
  const LabeledDataset d = parse_tudataset(dir.path, "T", &report);
  REQUIRE(d.size() == 2);
  CHECK(d.graphs[0] == Graph(3, {{0, 1}, {1, 2}}));
  CHECK(d.graphs[1] == Graph(2, {{0, 1}}));
  CHECK(d.labels == std::vector<int>{-1, 1});
  CHECK(d.class_count() == 2);
  CHECK(report.self_loops_dropped == 1);
  REQUIRE(d.node_attributes.size() == 2);
  CHECK(d.node_attributes[0](2, 0) == 9.0);
  CHECK(d.node_attributes[1](0, 0) == 1.0);
  CHECK(d.mean_vertices() == 2.5);
}

TEST_CASE("TU dataset: malformed inputs name the file and line") {
  TempDir dir;
  SUBCASE("bad integer") {
    write_tud(dir, "1, 2\n1, x\n", "1\n1\n", "0\n");
    CHECK(error_of([&] { parse_tudataset(dir.path, "T"); }).find("T_A.txt:2") != std::string::npos);
  }
  SUBCASE("missing column") {
    write_tud(dir, "1\n", "1\n1\n", "0\n");
    CHECK(error_of([&] { parse_tudataset(dir.path, "T"); }).find("T_A.txt:1") != std::string::npos);
  }
  SUBCASE("node outside every graph") {
    write_tud(dir, "1, 2\n2, 9\n", "1\n1\n", "0\n");
    const std::string e = error_of([&] { parse_tudataset(dir.path, "T"); });
    CHECK(e.find("T_A.txt:2") != std::string::npos);
    CHECK(e.find("not assigned") != std::string::npos);
  }
  SUBCASE("edge across graphs") {
    write_tud(dir, "1, 3\n", "1\n1\n2\n", "0\n1\n");
    CHECK(error_of([&] { parse_tudataset(dir.path, "T"); }).find("T_A.txt:1") != std::string::npos);
  }
  SUBCASE("label count mismatch") {
    write_tud(dir, "1, 2\n", "1\n1\n", "0\n1\n");
    CHECK_THROWS_AS(parse_tudataset(dir.path, "T"), DataError);
  }
  SUBCASE("zero-based indicator") {
    write_tud(dir, "1, 2\n", "0\n0\n", "0\n");
    CHECK(error_of([&] { parse_tudataset(dir.path, "T"); }).find("T_graph_indicator.txt:1") != std::string::npos);
  }
  SUBCASE("missing files") { CHECK_THROWS_AS(parse_tudataset(dir.path, "T"), DataError); }
}

TEST_CASE("GXL graph and CXL index") {
  TempDir dir;
  dir.write("p3.gxl", kP3Gxl);
  Eigen::MatrixXd pos;
  const Graph g = parse_gxl_graph(dir.path / "p3.gxl", &pos);
  CHECK(g == Graph(3, {{0, 1}, {1, 2}}));
  REQUIRE(pos.rows() == 3);
  CHECK(pos(0, 0) == 0.5);
  CHECK(pos(1, 1) == 2.0);

  dir.write("k.gxl", R"(<gxl><graph id="k"><node id="0"/><node id="1"/><edge from="0" to="1"/><edge from="1" to="0"/></graph></gxl>)");
  dir.write("train.cxl", R"(<GraphCollection><fingerprints>
    <print file="p3.gxl" class="Z"/>
    <print file="k.gxl" class="A"/>
  </fingerprints></GraphCollection>)");
  dir.write("test.cxl", R"(<GraphCollection><fingerprints><print file="p3.gxl" class="A"/></fingerprints></GraphCollection>)");
  const std::vector<std::string> splits{"train.cxl", "test.cxl"};
  ParseReport report;
  const LabeledDataset d = parse_gxl_dataset(dir.path, splits, &report);
  REQUIRE(d.size() == 3);
  CHECK(d.labels == std::vector<int>{1, 0, 0});
  CHECK(d.class_names == std::vector<std::string>{"A", "Z"});
  CHECK(d.graphs[1] == Graph(2, {{0, 1}}));
  CHECK(report.duplicate_edges_merged == 1);
}

TEST_CASE("GXL errors") {
  TempDir dir;
  dir.write("dangling.gxl", R"(<gxl><graph><node id="a"/><edge from="a" to="q"/></graph></gxl>)");
  CHECK(error_of([&] { parse_gxl_graph(dir.path / "dangling.gxl"); }).find("dangling") != std::string::npos);
  dir.write("broken.gxl", "<gxl><graph><node id=\"a\">\n</gxl>");
  CHECK_THROWS_AS(parse_gxl_graph(dir.path / "broken.gxl"), DataError);
  dir.write("p3.gxl", kP3Gxl);
  dir.write("noclass.cxl", R"(<c><print file="p3.gxl"/></c>)");
  const std::vector<std::string> splits{"noclass.cxl"};
  CHECK(error_of([&] { parse_gxl_dataset(dir.path, splits); }).find("no class") != std::string::npos);
  const std::vector<std::string> missing{"absent.cxl"};
  CHECK_THROWS_AS(parse_gxl_dataset(dir.path, missing), DataError);
}

TEST_CASE("JSONL") {
  TempDir dir;
  dir.write("d.jsonl", R"({"n": 3, "edges": [[0, 1], [1, 2]], "label": 0}

{"n": 1, "edges": [], "label": 2}
)");
  const LabeledDataset d = parse_jsonl(dir.path / "d.jsonl");
  REQUIRE(d.size() == 2);
  CHECK(d.graphs[0] == Graph(3, {{0, 1}, {1, 2}}));
  CHECK(d.graphs[1].node_count() == 1);
  CHECK(d.labels == std::vector<int>{0, 2});

  dir.write("empty.jsonl", "");
  CHECK(error_of([&] { parse_jsonl(dir.path / "empty.jsonl"); }).find("no graphs") != std::string::npos);
  dir.write("w.jsonl", "{\"n\": 2, \"edges\": [[0, 1]], \"label\": 0}\n{\"n\": 2, \"edges\": [[0, 1, 0.5]], \"label\": 0}\n");
  const std::string weighted = error_of([&] { parse_jsonl(dir.path / "w.jsonl"); });
  CHECK(weighted.find("w.jsonl:2") != std::string::npos);
  CHECK(weighted.find("weighted") != std::string::npos);
  dir.write("bad.jsonl", "{\"n\": 2, \"label\": 0}\n");
  CHECK(error_of([&] { parse_jsonl(dir.path / "bad.jsonl"); }).find("bad.jsonl:1") != std::string::npos);
  dir.write("loop.jsonl", "{\"n\": 2, \"edges\": [[1, 1]], \"label\": 0}\n");
  CHECK(error_of([&] { parse_jsonl(dir.path / "loop.jsonl"); }).find("loop.jsonl:1") != std::string::npos);
  dir.write("junk.jsonl", "not json\n");
  CHECK_THROWS_AS(parse_jsonl(dir.path / "junk.jsonl"), DataError);
}

TEST_CASE("JSONL round trip") {
  TempDir dir;
  const LabeledDataset d = testing::structured_dataset(5, 3, 8, 2);
  write_jsonl(dir.path / "rt.jsonl", d);
  const LabeledDataset back = parse_jsonl(dir.path / "rt.jsonl");
  CHECK(back.graphs == d.graphs);
  CHECK(back.labels == d.labels);
  std::ifstream in(dir.path / "rt.jsonl");
  std::string first;
  std::getline(in, first);
  CHECK(first.rfind("{\"n\":", 0) == 0);
}

TEST_CASE("manifests and load_dataset") {
  TempDir dir;
  const auto m = known_manifest("Llow", dir.path);
  REQUIRE(m);
  CHECK(m->format == DatasetFormat::Gxl);
  CHECK(m->expected_graphs == 2250u);
  CHECK(m->root == dir.path / "LOW");
  CHECK(known_manifest("NCI1", dir.path)->expected_classes == 2);
  CHECK_FALSE(known_manifest("MUTAG", dir.path));
  CHECK(reference_stats().size() == 6);
  CHECK(parse_format("tud") == DatasetFormat::Tud);
  CHECK(format_name(DatasetFormat::Jsonl) == "jsonl");
  CHECK_THROWS_AS(parse_format("csv"), UsageError);

  write_tud(dir, "1, 2\n", "1\n1\n", "0\n");
  DatasetManifest manual{"T", DatasetFormat::Tud, dir.path, {}, 1, 1};
  CHECK(load_dataset(manual).size() == 1);
  manual.expected_graphs = 2;
  CHECK_THROWS_AS(load_dataset(manual), DataError);
}
