#pragma once

#include "pssc/core.hpp"
#include "pssc/synth.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace pssc {

/// Everything needed to reproduce a `cluster` invocation.
struct RunConfig {
  HyperParams params;
  std::string input;
  std::string output;
  Method method = Method::pssc;
  int clusters = 2;
  bool normalize = true;

  void validate() const;
};

/// 17 significant digits, exact on round trip.
std::string format_double(double value);

/// Plain CSV, one ambient dimension per row, one point per column, no header.
/// Blank trailing lines are ignored. Throws ParseError with 1-based line and
/// column on malformed input.
Matrix parse_matrix(const std::string& text);
DataMatrix read_matrix(const std::filesystem::path& path);
void write_matrix(const std::filesystem::path& path, const Matrix& m);

/// One 0-based integer label per line.
Labels parse_labels(const std::string& text);
Labels read_labels(const std::filesystem::path& path);
void write_labels(const std::filesystem::path& path, const Labels& labels);

nlohmann::json params_to_json(const HyperParams& params);
HyperParams params_from_json(const nlohmann::json& j);

/// Result document. `meta.timestamp` is the only field that varies between
/// identical invocations; pass an empty timestamp to omit it.
nlohmann::json result_to_json(const ClusteringResult& result, const RunConfig& config,
                              const std::string& timestamp);
ClusteringResult result_from_json(const nlohmann::json& j);
void write_result(const std::filesystem::path& path, const ClusteringResult& result,
                  const RunConfig& config, const std::string& timestamp);

nlohmann::json benchmark_to_json(const BenchmarkTable& table);
BenchmarkTable benchmark_from_json(const nlohmann::json& j);

/// Table-shaped CSV: one row per method, one column per (C, ratio) cell.
/// `metric` is "error" or "ssr".
std::string benchmark_table_csv(const BenchmarkTable& table, const std::string& metric);
/// Every trial record, one row per (cell, trial, method).
std::string benchmark_raw_csv(const BenchmarkTable& table);
/// Per-iteration traces of every trial, including the no-early-stop runs.
std::string benchmark_trial_trace_csv(const BenchmarkTable& table);
/// Trial-averaged per-iteration traces.
std::string benchmark_mean_trace_csv(const BenchmarkTable& table);

/// Writes benchmark.json, table_error.csv, table_ssr.csv, raw.csv,
/// trace_trials.csv and trace_mean.csv into `dir`.
void write_benchmark(const std::filesystem::path& dir, const BenchmarkTable& table,
                     const std::string& timestamp);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace pssc
