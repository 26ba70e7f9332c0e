#pragma once

#include <chrono>
#include <string>

#include "run_config.hpp"

namespace gefrfe::cli {

/// Progress and timing lines on stderr.
class Log {
 public:
  explicit Log(bool quiet) : quiet_(quiet), start_(std::chrono::steady_clock::now()) {}
  void operator()(const std::string& msg) const;

 private:
  bool quiet_;
  std::chrono::steady_clock::time_point start_;
};

struct FetchOptions {
  std::string dataset;
  std::string data_dir;
  std::string archive;
  std::string sha256;
};

int cmd_info(const RunConfig& cfg, const Log& log);
int cmd_fetch(const FetchOptions& opt, const Log& log);
int cmd_embed(const RunConfig& cfg, const Log& log);
int cmd_gridsearch(const RunConfig& cfg, const Log& log);
int cmd_forward(const RunConfig& cfg, const Log& log);
int cmd_evaluate(const RunConfig& cfg, const Log& log);

struct ScalingOptions {
  std::vector<int> sizes{16, 32, 64, 128};
  int graphs_per_size = 5;
  double edge_prob = 0.3;
};
int cmd_bench_scaling(const RunConfig& cfg, const ScalingOptions& opt, const Log& log);

}  // namespace gefrfe::cli
