#include "pssc/cli.hpp"

#include "pssc/driver.hpp"
#include "pssc/errors.hpp"
#include "pssc/io.hpp"
#include "pssc/metrics.hpp"
#include "pssc/rng.hpp"
#include "pssc/synth.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>

namespace pssc {
namespace {

namespace fs = std::filesystem;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

struct ParamFlags {
  HyperParams params;
  std::string spectral = "incremental";

  HyperParams resolve() const {
    HyperParams p = params;
    p.spectral_mode = spectral_mode_from_string(spectral);
    return p;
  }
};

void add_param_flags(CLI::App* app, ParamFlags& f) {
  app->add_option("--tmax", f.params.t_max, "maximum outer iterations")->capture_default_str();
  app->add_option("--ratio", f.params.lambda_ratio, "lambda0 / lambda1")->capture_default_str();
  app->add_option("--alpha", f.params.alpha, "l1 scale divisor")->capture_default_str();
  app->add_option("--tol", f.params.solver_tol, "coordinate descent tolerance")
      ->capture_default_str();
  app->add_option("--max-sweeps", f.params.solver_max_sweeps, "full sweeps per column")
      ->capture_default_str();
  app->add_option("--restarts", f.params.kmeans_restarts, "k-means restarts")
      ->capture_default_str();
  app->add_option("--spectral", f.spectral, "spectral mode after the first iteration")
      ->check(CLI::IsMember({"full", "incremental"}))
      ->capture_default_str();
  app->add_option("--workers", f.params.workers, "worker threads")->capture_default_str();
}

struct GenerateArgs {
  int clusters = 2;
  int ambient = 200;
  int dim = 10;
  double intersect = 0.5;
  int points = 100;
  std::uint64_t seed = 0;
  std::string out;
};

int do_generate(const GenerateArgs& a) {
  const int s = intersection_dim_for(a.intersect, a.dim);
  const SubspaceModel model =
      generate_subspaces(a.clusters, a.ambient, a.dim, s, a.points, derive_seed(a.seed, {1}));
  const SampledData data = sample_points(model, derive_seed(a.seed, {2}));
  const fs::path dir(a.out);
  fs::create_directories(dir);
  write_matrix(dir / "X.csv", data.X);
  write_labels(dir / "labels.txt", data.truth);
  std::cout << "wrote " << (dir / "X.csv").string() << " (" << data.X.rows() << " x "
            << data.X.cols() << ") and " << (dir / "labels.txt").string() << "\n";
  return 0;
}

struct ClusterArgs {
  ParamFlags flags;
  std::string input;
  std::string out;
  std::string method = "pssc";
  int clusters = 2;
  bool no_normalize = false;
  bool no_timestamp = false;
  std::string labels_out;
  std::string z_out;
};

int do_cluster(const ClusterArgs& a) {
  RunConfig config;
  config.params = a.flags.resolve();
  config.input = a.input;
  config.output = a.out;
  config.method = method_from_string(a.method);
  config.clusters = a.clusters;
  config.normalize = !a.no_normalize;
  config.validate();

  const DataMatrix X = validate_dataset(read_matrix(config.input), config.clusters,
                                        config.normalize);
  const ClusteringResult result = config.method == Method::pssc
                                      ? run(X, config.clusters, config.params)
                                      : run_ssc_baseline(X, config.clusters, config.params);
  write_result(config.output, result, config, a.no_timestamp ? "" : utc_timestamp());
  if (!a.labels_out.empty()) write_labels(a.labels_out, result.labels);
  if (!a.z_out.empty()) write_matrix(a.z_out, result.Z);
  for (const auto& w : result.warnings) std::cerr << "warning: " << w << "\n";
  std::cout << "iterations " << result.iterations << ", stop " << to_string(result.stop_reason)
            << ", wrote " << config.output << "\n";
  return 0;
}

struct BenchmarkArgs {
  ParamFlags flags;
  std::vector<int> clusters{2};
  std::vector<double> intersect{0.5};
  std::vector<std::string> methods{"pssc", "ssc"};
  int trials = 20;
  std::uint64_t seed = 0;
  int ambient = 200;
  int dim = 10;
  int points = 100;
  int kappa_trace = 0;
  int trial_workers = 1;
  bool no_timestamp = false;
  std::string out;
};

int do_benchmark(const BenchmarkArgs& a) {
  BenchmarkGrid grid;
  grid.clusters = a.clusters;
  grid.ratios = a.intersect;
  grid.methods.clear();
  for (const auto& m : a.methods) grid.methods.push_back(method_from_string(m));
  grid.trials = a.trials;
  grid.base_seed = a.seed;
  grid.ambient_dim = a.ambient;
  grid.dim = a.dim;
  grid.points_per_subspace = a.points;
  grid.kappa_decay_iterations = a.kappa_trace;
  grid.workers = a.trial_workers;

  const BenchmarkTable table = run_benchmark(grid, a.flags.resolve());
  write_benchmark(a.out, table, a.no_timestamp ? "" : utc_timestamp());

  int failed = 0;
  for (const auto& r : table.trials) failed += r.failed ? 1 : 0;
  for (const auto& c : table.cells) {
    std::cout << to_string(c.method) << " C=" << c.clusters << " ratio=" << c.ratio
              << " error=" << c.mean_error << " ssr=" << c.mean_ssr
              << " iterations=" << c.mean_iterations << "\n";
  }
  if (failed > 0) std::cerr << failed << " trial runs failed, see raw.csv\n";
  return 0;
}

struct MetricsArgs {
  std::string pred;
  std::string truth;
  std::string z;
  int clusters = 2;
};

int do_metrics(const MetricsArgs& a) {
  const Labels pred = read_labels(a.pred);
  const Labels truth = read_labels(a.truth);
  if (pred.size() != truth.size()) {
    throw DimensionError("prediction has " + std::to_string(pred.size()) +
                         " labels, truth has " + std::to_string(truth.size()));
  }
  nlohmann::ordered_json j;
  j["points"] = pred.size();
  j["clusters"] = a.clusters;
  j["agreement"] = best_agreement(pred, truth, a.clusters);
  j["misclassification"] = misclassification(pred, truth, a.clusters);
  if (!a.z.empty()) {
    const Matrix Z = parse_matrix(read_text_file(a.z));
    if (Z.rows() != Z.cols() || static_cast<std::size_t>(Z.cols()) != truth.size()) {
      throw DimensionError("coefficient matrix must be N x N with N = " +
                           std::to_string(truth.size()));
    }
    j["ssr"] = ssr_error(Z, truth, a.clusters);
  }
  std::cout << j.dump(2) << "\n";
  return 0;
}

// Appends `--key value` for every key=value line of the file named by
// --config, skipping keys already given on the command line.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> out;
  std::string path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
    } else {
      out.push_back(args[i]);
    }
  }
  if (path.empty()) return out;

  auto given = [&](const std::string& flag) {
    for (const auto& a : out) {
      if (a == flag || a.rfind(flag + "=", 0) == 0) return true;
    }
    return false;
  };
  auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };

  std::istringstream in(read_text_file(path));
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(lineno, 1, "expected key=value in " + path);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const std::string flag = "--" + key;
    if (key.empty()) throw ParseError(lineno, 1, "empty key in " + path);
    if (given(flag)) continue;
    if (value == "true") {
      out.push_back(flag);
    } else if (value != "false") {
      out.push_back(flag);
      out.push_back(value);
    }
  }
  return out;
}

}  // namespace

int cli_main(const std::vector<std::string>& raw_args) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 1;
  }

  CLI::App app{"Probabilistic sparse subspace clustering", "pssc"};
  app.set_version_flag("--version", std::string(PSSC_VERSION));
  app.require_subcommand(1);
  app.footer("Any subcommand also accepts --config FILE with key=value lines named after "
             "its flags; flags on the command line take precedence.");

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "sample points from intersecting subspaces");
  generate->add_option("--clusters", gen.clusters, "number of subspaces")->capture_default_str();
  generate->add_option("--ambient", gen.ambient, "ambient dimension")->capture_default_str();
  generate->add_option("--dim", gen.dim, "subspace dimension")->capture_default_str();
  generate->add_option("--intersect", gen.intersect, "shared dimension as a fraction of --dim")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  generate->add_option("--points", gen.points, "points per subspace")->capture_default_str();
  generate->add_option("--seed", gen.seed, "random seed")->capture_default_str();
  generate->add_option("--out", gen.out, "output directory")->required();

  ClusterArgs cl;
  auto* cluster = app.add_subcommand("cluster", "cluster the columns of a CSV matrix");
  cluster->add_option("--input", cl.input, "CSV matrix, one point per column")->required();
  cluster->add_option("--clusters", cl.clusters, "number of clusters")->required();
  cluster->add_option("--method", cl.method, "pssc or ssc")
      ->check(CLI::IsMember({"pssc", "ssc"}))
      ->capture_default_str();
  cluster->add_option("--seed", cl.flags.params.seed, "random seed")->capture_default_str();
  add_param_flags(cluster, cl.flags);
  cluster->add_flag("--no-normalize", cl.no_normalize, "keep column norms as given");
  cluster->add_flag("--no-timestamp", cl.no_timestamp, "omit meta.timestamp");
  cluster->add_option("--out", cl.out, "result JSON path")->required();
  cluster->add_option("--labels-out", cl.labels_out, "also write labels, one per line");
  cluster->add_option("--z-out", cl.z_out, "also write the coefficient matrix as CSV");

  BenchmarkArgs bm;
  auto* benchmark = app.add_subcommand("benchmark", "run the synthetic benchmark grid");
  benchmark->add_option("--clusters", bm.clusters, "comma-separated cluster counts")
      ->delimiter(',')
      ->capture_default_str();
  benchmark->add_option("--intersect", bm.intersect, "comma-separated intersection ratios")
      ->delimiter(',')
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  benchmark->add_option("--methods", bm.methods, "comma-separated subset of pssc,ssc")
      ->delimiter(',')
      ->check(CLI::IsMember({"pssc", "ssc"}))
      ->capture_default_str();
  benchmark->add_option("--trials", bm.trials, "trials per cell")->capture_default_str();
  benchmark->add_option("--seed", bm.seed, "base seed")->capture_default_str();
  benchmark->add_option("--ambient", bm.ambient, "ambient dimension")->capture_default_str();
  benchmark->add_option("--dim", bm.dim, "subspace dimension")->capture_default_str();
  benchmark->add_option("--points", bm.points, "points per subspace")->capture_default_str();
  benchmark->add_option("--kappa-trace", bm.kappa_trace,
                        "also run this many iterations without early stopping")
      ->capture_default_str();
  benchmark->add_option("--trial-workers", bm.trial_workers, "trials run concurrently")
      ->capture_default_str();
  add_param_flags(benchmark, bm.flags);
  benchmark->add_flag("--no-timestamp", bm.no_timestamp, "omit meta.timestamp");
  benchmark->add_option("--out", bm.out, "output directory")->required();

  MetricsArgs mt;
  auto* metrics = app.add_subcommand("metrics", "score predicted labels against the truth");
  metrics->add_option("--pred", mt.pred, "predicted labels file")->required();
  metrics->add_option("--truth", mt.truth, "true labels file")->required();
  metrics->add_option("--clusters", mt.clusters, "number of clusters")->required();
  metrics->add_option("--z", mt.z, "coefficient matrix CSV, adds the ssr field");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*generate) return do_generate(gen);
    if (*cluster) return do_cluster(cl);
    if (*benchmark) return do_benchmark(bm);
    if (*metrics) return do_metrics(mt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args);
}

}  // namespace pssc
