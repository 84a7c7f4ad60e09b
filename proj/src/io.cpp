#include "pssc/io.hpp"

#include "pssc/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pssc {

using nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_lines(const std::string& text) {
  std::vector<std::string_view> lines;
  std::string_view rest(text);
  while (!rest.empty()) {
    const auto nl = rest.find('\n');
    lines.push_back(rest.substr(0, nl));
    if (nl == std::string_view::npos) break;
    rest.remove_prefix(nl + 1);
  }
  while (!lines.empty() && trim(lines.back()).empty()) lines.pop_back();
  return lines;
}

template <class T>
T parse_number(std::string_view field, std::size_t line, std::size_t col) {
  field = trim(field);
  T value{};
  const auto* end = field.data() + field.size();
  const auto [ptr, ec] = std::from_chars(field.data(), end, value);
  if (field.empty() || ec != std::errc() || ptr != end) {
    throw ParseError(line, col, "not a number: '" + std::string(field) + "'");
  }
  return value;
}

// Column headers use the short form of the ratio ("C2_0.4", not 17 digits).
std::string cell_name(int clusters, double ratio) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.15g", ratio);
  return "C" + std::to_string(clusters) + "_" + buf;
}

json trial_to_json(const TrialRecord& r) {
  return {{"clusters", r.clusters},
          {"ratio", r.ratio},
          {"trial", r.trial},
          {"seed", r.seed},
          {"method", to_string(r.method)},
          {"failed", r.failed},
          {"failure", r.failure},
          {"data_hash", r.data_hash},
          {"points", r.points},
          {"error", r.error},
          {"ssr", r.ssr},
          {"iterations", r.iterations},
          {"stop_reason", std::string(to_string(r.stop_reason))},
          {"kappa_trace", r.kappa_trace},
          {"error_trace", r.error_trace}};
}

TrialRecord trial_from_json(const json& j) {
  TrialRecord r;
  r.clusters = j.at("clusters").get<int>();
  r.ratio = j.at("ratio").get<double>();
  r.trial = j.at("trial").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.method = method_from_string(j.at("method").get<std::string>());
  r.failed = j.at("failed").get<bool>();
  r.failure = j.at("failure").get<std::string>();
  r.data_hash = j.at("data_hash").get<std::uint64_t>();
  r.points = j.at("points").get<int>();
  r.error = j.at("error").get<double>();
  r.ssr = j.at("ssr").get<double>();
  r.iterations = j.at("iterations").get<int>();
  r.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
  r.kappa_trace = j.at("kappa_trace").get<std::vector<int>>();
  r.error_trace = j.at("error_trace").get<std::vector<double>>();
  return r;
}

json decay_to_json(const KappaDecayRecord& r) {
  return {{"clusters", r.clusters}, {"ratio", r.ratio},   {"trial", r.trial},
          {"seed", r.seed},         {"failed", r.failed}, {"failure", r.failure},
          {"points", r.points},     {"kappa_trace", r.kappa_trace},
          {"error_trace", r.error_trace}};
}

KappaDecayRecord decay_from_json(const json& j) {
  KappaDecayRecord r;
  r.clusters = j.at("clusters").get<int>();
  r.ratio = j.at("ratio").get<double>();
  r.trial = j.at("trial").get<int>();
  r.seed = j.at("seed").get<std::uint64_t>();
  r.failed = j.at("failed").get<bool>();
  r.failure = j.at("failure").get<std::string>();
  r.points = j.at("points").get<int>();
  r.kappa_trace = j.at("kappa_trace").get<std::vector<int>>();
  r.error_trace = j.at("error_trace").get<std::vector<double>>();
  return r;
}

json grid_to_json(const BenchmarkGrid& g) {
  std::vector<std::string> methods;
  for (auto m : g.methods) methods.push_back(to_string(m));
  return {{"clusters", g.clusters},
          {"ratios", g.ratios},
          {"methods", methods},
          {"trials", g.trials},
          {"base_seed", g.base_seed},
          {"ambient_dim", g.ambient_dim},
          {"dim", g.dim},
          {"points_per_subspace", g.points_per_subspace},
          {"kappa_decay_iterations", g.kappa_decay_iterations}};
}

BenchmarkGrid grid_from_json(const json& j) {
  BenchmarkGrid g;
  g.clusters = j.at("clusters").get<std::vector<int>>();
  g.ratios = j.at("ratios").get<std::vector<double>>();
  g.methods.clear();
  for (const auto& m : j.at("methods")) g.methods.push_back(method_from_string(m.get<std::string>()));
  g.trials = j.at("trials").get<int>();
  g.base_seed = j.at("base_seed").get<std::uint64_t>();
  g.ambient_dim = j.at("ambient_dim").get<int>();
  g.dim = j.at("dim").get<int>();
  g.points_per_subspace = j.at("points_per_subspace").get<int>();
  g.kappa_decay_iterations = j.at("kappa_decay_iterations").get<int>();
  return g;
}

}  // namespace

void RunConfig::validate() const {
  if (input.empty()) throw DimensionError("input path is empty");
  if (output.empty()) throw DimensionError("output path is empty");
  if (clusters < 2) throw DimensionError("cluster count must be at least 2");
  params.validate();
}

std::string format_double(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

Matrix parse_matrix(const std::string& text) {
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, 1, "empty matrix file");
  std::vector<std::vector<double>> rows;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    std::vector<double> row;
    std::string_view rest = lines[li];
    std::size_t col = 1;
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_number<double>(rest.substr(0, comma), li + 1, col));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
      ++col;
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(li + 1, std::min(row.size(), rows.front().size()) + 1,
                       "expected " + std::to_string(rows.front().size()) + " values, found " +
                           std::to_string(row.size()));
    }
    rows.push_back(std::move(row));
  }
  Matrix m(static_cast<Index>(rows.size()), static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
  }
  return m;
}

DataMatrix read_matrix(const std::filesystem::path& path) {
  return DataMatrix(parse_matrix(read_text_file(path)));
}

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  std::string out;
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out += ',';
      out += format_double(m(i, j));
    }
    out += '\n';
  }
  write_text_file(path, out);
}

Labels parse_labels(const std::string& text) {
  const auto lines = split_lines(text);
  Labels labels;
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const int v = parse_number<int>(lines[li], li + 1, 1);
    if (v < 0) throw ParseError(li + 1, 1, "labels must be non-negative");
    labels.push_back(v);
  }
  return labels;
}

Labels read_labels(const std::filesystem::path& path) {
  return parse_labels(read_text_file(path));
}

void write_labels(const std::filesystem::path& path, const Labels& labels) {
  std::string out;
  for (int l : labels) out += std::to_string(l) + '\n';
  write_text_file(path, out);
}

json params_to_json(const HyperParams& p) {
  return {{"alpha", p.alpha},
          {"lambda_ratio", p.lambda_ratio},
          {"t_max", p.t_max},
          {"solver_tol", p.solver_tol},
          {"solver_max_sweeps", p.solver_max_sweeps},
          {"kmeans_restarts", p.kmeans_restarts},
          {"seed", p.seed},
          {"spectral_mode", std::string(to_string(p.spectral_mode))},
          {"early_stop", p.early_stop},
          {"workers", p.workers}};
}

HyperParams params_from_json(const json& j) {
  HyperParams p;
  p.alpha = j.at("alpha").get<double>();
  p.lambda_ratio = j.at("lambda_ratio").get<double>();
  p.t_max = j.at("t_max").get<int>();
  p.solver_tol = j.at("solver_tol").get<double>();
  p.solver_max_sweeps = j.at("solver_max_sweeps").get<int>();
  p.kmeans_restarts = j.at("kmeans_restarts").get<int>();
  p.seed = j.at("seed").get<std::uint64_t>();
  p.spectral_mode = spectral_mode_from_string(j.at("spectral_mode").get<std::string>());
  p.early_stop = j.at("early_stop").get<bool>();
  p.workers = j.at("workers").get<int>();
  return p;
}

json result_to_json(const ClusteringResult& result, const RunConfig& config,
                    const std::string& timestamp) {
  if (result.history.empty()) throw Error("refusing to write a result with empty history");
  if (static_cast<int>(result.history.size()) != result.iterations) {
    throw Error("result history length does not match iteration count");
  }
  json history = json::array();
  for (const auto& h : result.history) {
    history.push_back({{"t", h.t},
                       {"kappa", h.kappa},
                       {"omega", h.omega},
                       {"objective", h.objective},
                       {"labels", h.labels}});
  }
  json params = params_to_json(config.params);
  params["method"] = to_string(config.method);
  params["clusters"] = config.clusters;
  params["normalize"] = config.normalize;
  params["input"] = config.input;

  json meta = {{"version", PSSC_VERSION}, {"seed", config.params.seed}};
  if (!timestamp.empty()) meta["timestamp"] = timestamp;

  return {{"labels", result.labels},
          {"iterations", result.iterations},
          {"stop_reason", std::string(to_string(result.stop_reason))},
          {"history", std::move(history)},
          {"params", std::move(params)},
          {"warnings", result.warnings},
          {"meta", std::move(meta)}};
}

ClusteringResult result_from_json(const json& j) {
  ClusteringResult r;
  r.labels = j.at("labels").get<Labels>();
  r.iterations = j.at("iterations").get<int>();
  r.stop_reason = stop_reason_from_string(j.at("stop_reason").get<std::string>());
  for (const auto& h : j.at("history")) {
    IterationRecord rec;
    rec.t = h.at("t").get<int>();
    rec.kappa = h.at("kappa").get<int>();
    rec.omega = h.at("omega").get<double>();
    rec.objective = h.at("objective").get<double>();
    rec.labels = h.at("labels").get<Labels>();
    r.history.push_back(std::move(rec));
  }
  r.warnings = j.at("warnings").get<std::vector<std::string>>();
  return r;
}

void write_result(const std::filesystem::path& path, const ClusteringResult& result,
                  const RunConfig& config, const std::string& timestamp) {
  write_text_file(path, result_to_json(result, config, timestamp).dump(2) + "\n");
}

json benchmark_to_json(const BenchmarkTable& table) {
  json trials = json::array();
  for (const auto& r : table.trials) trials.push_back(trial_to_json(r));
  json decay = json::array();
  for (const auto& r : table.decay) decay.push_back(decay_to_json(r));
  json cells = json::array();
  for (const auto& c : table.cells) {
    cells.push_back({{"clusters", c.clusters},
                     {"ratio", c.ratio},
                     {"method", to_string(c.method)},
                     {"trials_ok", c.trials_ok},
                     {"trials_failed", c.trials_failed},
                     {"mean_error", c.mean_error},
                     {"median_error", c.median_error},
                     {"mean_ssr", c.mean_ssr},
                     {"median_ssr", c.median_ssr},
                     {"mean_iterations", c.mean_iterations},
                     {"mean_error_trace", c.mean_error_trace},
                     {"mean_kappa_fraction_trace", c.mean_kappa_fraction_trace}});
  }
  json decay_cells = json::array();
  for (const auto& c : table.decay_cells) {
    decay_cells.push_back({{"clusters", c.clusters},
                           {"ratio", c.ratio},
                           {"trials_ok", c.trials_ok},
                           {"trials_failed", c.trials_failed},
                           {"mean_kappa_fraction_trace", c.mean_kappa_fraction_trace},
                           {"mean_error_trace", c.mean_error_trace}});
  }
  return {{"grid", grid_to_json(table.grid)},
          {"params", params_to_json(table.params)},
          {"trials", std::move(trials)},
          {"decay", std::move(decay)},
          {"cells", std::move(cells)},
          {"decay_cells", std::move(decay_cells)}};
}

BenchmarkTable benchmark_from_json(const json& j) {
  BenchmarkTable t;
  t.grid = grid_from_json(j.at("grid"));
  t.params = params_from_json(j.at("params"));
  for (const auto& r : j.at("trials")) t.trials.push_back(trial_from_json(r));
  for (const auto& r : j.at("decay")) t.decay.push_back(decay_from_json(r));
  for (const auto& c : j.at("cells")) {
    CellSummary s;
    s.clusters = c.at("clusters").get<int>();
    s.ratio = c.at("ratio").get<double>();
    s.method = method_from_string(c.at("method").get<std::string>());
    s.trials_ok = c.at("trials_ok").get<int>();
    s.trials_failed = c.at("trials_failed").get<int>();
    s.mean_error = c.at("mean_error").get<double>();
    s.median_error = c.at("median_error").get<double>();
    s.mean_ssr = c.at("mean_ssr").get<double>();
    s.median_ssr = c.at("median_ssr").get<double>();
    s.mean_iterations = c.at("mean_iterations").get<double>();
    s.mean_error_trace = c.at("mean_error_trace").get<std::vector<double>>();
    s.mean_kappa_fraction_trace = c.at("mean_kappa_fraction_trace").get<std::vector<double>>();
    t.cells.push_back(std::move(s));
  }
  for (const auto& c : j.at("decay_cells")) {
    KappaDecaySummary s;
    s.clusters = c.at("clusters").get<int>();
    s.ratio = c.at("ratio").get<double>();
    s.trials_ok = c.at("trials_ok").get<int>();
    s.trials_failed = c.at("trials_failed").get<int>();
    s.mean_kappa_fraction_trace = c.at("mean_kappa_fraction_trace").get<std::vector<double>>();
    s.mean_error_trace = c.at("mean_error_trace").get<std::vector<double>>();
    t.decay_cells.push_back(std::move(s));
  }
  return t;
}

std::string benchmark_table_csv(const BenchmarkTable& table, const std::string& metric) {
  if (metric != "error" && metric != "ssr") throw Error("unknown table metric: " + metric);
  const auto& g = table.grid;
  std::string out = "method";
  for (int C : g.clusters) {
    for (double ratio : g.ratios) out += "," + cell_name(C, ratio);
  }
  out += '\n';
  for (Method m : g.methods) {
    out += to_string(m);
    for (int C : g.clusters) {
      for (double ratio : g.ratios) {
        out += ',';
        for (const auto& c : table.cells) {
          if (c.clusters == C && c.ratio == ratio && c.method == m) {
            out += format_double(metric == "error" ? c.mean_error : c.mean_ssr);
            break;
          }
        }
      }
    }
    out += '\n';
  }
  return out;
}

std::string benchmark_raw_csv(const BenchmarkTable& table) {
  std::string out =
      "clusters,ratio,trial,seed,method,failed,error,ssr,iterations,stop_reason,data_hash\n";
  for (const auto& r : table.trials) {
    out += std::to_string(r.clusters) + ',' + format_double(r.ratio) + ',' +
           std::to_string(r.trial) + ',' + std::to_string(r.seed) + ',' + to_string(r.method) +
           ',' + (r.failed ? "1" : "0") + ',' + format_double(r.error) + ',' +
           format_double(r.ssr) + ',' + std::to_string(r.iterations) + ',' +
           std::string(to_string(r.stop_reason)) + ',' + std::to_string(r.data_hash) + '\n';
  }
  return out;
}

std::string benchmark_trial_trace_csv(const BenchmarkTable& table) {
  std::string out = "clusters,ratio,trial,variant,t,kappa,kappa_fraction,error\n";
  auto emit = [&](int C, double ratio, int trial, const std::string& variant, int points,
                  const std::vector<int>& kappa, const std::vector<double>& error) {
    for (std::size_t k = 0; k < kappa.size(); ++k) {
      out += std::to_string(C) + ',' + format_double(ratio) + ',' + std::to_string(trial) +
             ',' + variant + ',' + std::to_string(k + 1) + ',' + std::to_string(kappa[k]) +
             ',' + format_double(static_cast<double>(kappa[k]) / points) + ',' +
             format_double(error[k]) + '\n';
    }
  };
  for (const auto& r : table.trials) {
    if (!r.failed) emit(r.clusters, r.ratio, r.trial, to_string(r.method), r.points, r.kappa_trace, r.error_trace);
  }
  for (const auto& r : table.decay) {
    if (!r.failed) emit(r.clusters, r.ratio, r.trial, "pssc_no_early_stop", r.points, r.kappa_trace, r.error_trace);
  }
  return out;
}

std::string benchmark_mean_trace_csv(const BenchmarkTable& table) {
  std::string out = "clusters,ratio,variant,t,mean_kappa_fraction,mean_error\n";
  auto emit = [&](int C, double ratio, const std::string& variant,
                  const std::vector<double>& kappa, const std::vector<double>& error) {
    for (std::size_t k = 0; k < kappa.size(); ++k) {
      out += std::to_string(C) + ',' + format_double(ratio) + ',' + variant + ',' +
             std::to_string(k + 1) + ',' + format_double(kappa[k]) + ',' +
             format_double(error[k]) + '\n';
    }
  };
  for (const auto& c : table.cells) {
    emit(c.clusters, c.ratio, to_string(c.method), c.mean_kappa_fraction_trace, c.mean_error_trace);
  }
  for (const auto& c : table.decay_cells) {
    emit(c.clusters, c.ratio, "pssc_no_early_stop", c.mean_kappa_fraction_trace, c.mean_error_trace);
  }
  return out;
}

void write_benchmark(const std::filesystem::path& dir, const BenchmarkTable& table,
                     const std::string& timestamp) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create directory " + dir.string() + ": " + ec.message());
  json doc = benchmark_to_json(table);
  json meta = {{"version", PSSC_VERSION}, {"seed", table.grid.base_seed}};
  if (!timestamp.empty()) meta["timestamp"] = timestamp;
  doc["meta"] = std::move(meta);
  write_text_file(dir / "benchmark.json", doc.dump(2) + "\n");
  write_text_file(dir / "table_error.csv", benchmark_table_csv(table, "error"));
  write_text_file(dir / "table_ssr.csv", benchmark_table_csv(table, "ssr"));
  write_text_file(dir / "raw.csv", benchmark_raw_csv(table));
  write_text_file(dir / "trace_trials.csv", benchmark_trial_trace_csv(table));
  write_text_file(dir / "trace_mean.csv", benchmark_mean_trace_csv(table));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("write failed for " + path.string());
}

}  // namespace pssc
