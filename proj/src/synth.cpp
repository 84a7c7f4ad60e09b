#include "pssc/synth.hpp"

#include "pssc/driver.hpp"
#include "pssc/errors.hpp"
#include "pssc/metrics.hpp"
#include "pssc/parallel.hpp"
#include "pssc/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <random>

namespace pssc {

namespace {

Matrix gaussian(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(rows, cols);
  // Column-major fill order is part of the reproducibility contract.
  for (Index j = 0; j < cols; ++j) {
    for (Index i = 0; i < rows; ++i) m(i, j) = normal(rng);
  }
  return m;
}

Matrix orthonormal_columns(const Matrix& m) {
  Eigen::HouseholderQR<Matrix> qr(m);
  return qr.householderQ() * Matrix::Identity(m.rows(), m.cols());
}

}  // namespace

int intersection_dim_for(double ratio, int dim) {
  if (!(ratio >= 0.0 && ratio < 1.0)) throw DimensionError("intersection ratio must lie in [0, 1)");
  return static_cast<int>(std::lround(ratio * dim));
}

SubspaceModel generate_subspaces(int clusters, int ambient_dim, int dim, int intersection_dim,
                                 int points_per_subspace, std::uint64_t seed) {
  if (clusters < 2) throw DimensionError("need at least two subspaces");
  if (!(0 <= intersection_dim && intersection_dim < dim && dim <= ambient_dim)) {
    throw DimensionError("need 0 <= s < d <= n");
  }
  if (points_per_subspace < 1) throw DimensionError("points per subspace must be positive");

  SubspaceModel model;
  model.clusters = clusters;
  model.ambient_dim = ambient_dim;
  model.dim = dim;
  model.intersection_dim = intersection_dim;
  model.points_per_subspace = points_per_subspace;

  Rng rng(seed);
  const Matrix first = orthonormal_columns(gaussian(ambient_dim, dim, rng));
  model.bases.push_back(first);
  const Matrix shared = first.leftCols(intersection_dim);
  const int own = dim - intersection_dim;

  for (int j = 1; j < clusters; ++j) {
    Matrix disjoint = gaussian(ambient_dim, own, rng);
    // Two projection passes keep the shared block orthogonal to round-off.
    for (int pass = 0; pass < 2; ++pass) {
      disjoint -= shared * (shared.transpose() * disjoint);
      disjoint = orthonormal_columns(disjoint);
    }
    Matrix basis(ambient_dim, dim);
    basis << shared, disjoint;
    model.bases.push_back(std::move(basis));
  }
  return model;
}

SampledData sample_points(const SubspaceModel& model, std::uint64_t seed) {
  if (static_cast<int>(model.bases.size()) != model.clusters) {
    throw DimensionError("model has the wrong number of bases");
  }
  Rng rng(seed);
  const Index per = model.points_per_subspace;
  SampledData out;
  out.X.resize(model.ambient_dim, per * model.clusters);
  out.truth.reserve(static_cast<std::size_t>(per * model.clusters));
  for (int j = 0; j < model.clusters; ++j) {
    const Matrix coeffs = gaussian(model.dim, per, rng);
    Matrix pts = model.bases[static_cast<std::size_t>(j)] * coeffs;
    pts.colwise().normalize();
    out.X.middleCols(j * per, per) = pts;
    out.truth.insert(out.truth.end(), static_cast<std::size_t>(per), j);
  }
  return out;
}

std::string to_string(Method m) { return m == Method::pssc ? "pssc" : "ssc"; }

Method method_from_string(const std::string& name) {
  if (name == "pssc") return Method::pssc;
  if (name == "ssc") return Method::ssc;
  throw Error("unknown method: " + name);
}

std::uint64_t trial_seed(std::uint64_t base_seed, int clusters, double ratio, int trial) {
  return derive_seed(base_seed, {static_cast<std::uint64_t>(clusters), seed_key(ratio),
                                 static_cast<std::uint64_t>(trial)});
}

std::uint64_t hash_matrix(const Matrix& m) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  const auto* bytes = reinterpret_cast<const unsigned char*>(m.data());
  const auto n = static_cast<std::size_t>(m.size()) * sizeof(double);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= bytes[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const std::size_t mid = values.size() / 2;
  return values.size() % 2 == 1 ? values[mid] : 0.5 * (values[mid - 1] + values[mid]);
}

std::vector<double> mean_padded_trace(const std::vector<std::vector<double>>& traces) {
  std::size_t len = 0;
  for (const auto& t : traces) len = std::max(len, t.size());
  std::vector<double> mean(len, 0.0);
  std::size_t used = 0;
  for (const auto& t : traces) {
    if (t.empty()) continue;
    ++used;
    for (std::size_t k = 0; k < len; ++k) mean[k] += k < t.size() ? t[k] : t.back();
  }
  if (used > 0) {
    for (auto& v : mean) v /= static_cast<double>(used);
  }
  return mean;
}

namespace {

struct TrialOutput {
  std::vector<TrialRecord> records;
  KappaDecayRecord decay;
  bool has_decay = false;
};

std::vector<double> errors_per_iteration(const ClusteringResult& r, const Labels& truth,
                                         int clusters) {
  std::vector<double> out;
  for (const auto& h : r.history) out.push_back(misclassification(h.labels, truth, clusters));
  return out;
}

std::vector<int> kappas(const ClusteringResult& r) {
  std::vector<int> out;
  for (const auto& h : r.history) out.push_back(h.kappa);
  return out;
}

TrialOutput run_trial(const BenchmarkGrid& grid, const HyperParams& base_params, int clusters,
                      double ratio, int trial) {
  TrialOutput out;
  const std::uint64_t seed = trial_seed(grid.base_seed, clusters, ratio, trial);
  HyperParams params = base_params;
  params.seed = derive_seed(seed, {3});

  SampledData data;
  std::string setup_error;
  try {
    const auto model =
        generate_subspaces(clusters, grid.ambient_dim, grid.dim,
                           intersection_dim_for(ratio, grid.dim), grid.points_per_subspace,
                           derive_seed(seed, {1}));
    data = sample_points(model, derive_seed(seed, {2}));
  } catch (const std::exception& e) {
    setup_error = e.what();
  }

  for (Method method : grid.methods) {
    TrialRecord rec;
    rec.clusters = clusters;
    rec.ratio = ratio;
    rec.trial = trial;
    rec.seed = seed;
    rec.method = method;
    rec.points = static_cast<int>(data.X.cols());
    if (!setup_error.empty()) {
      rec.failed = true;
      rec.failure = setup_error;
      out.records.push_back(std::move(rec));
      continue;
    }
    try {
      const DataMatrix X = validate_dataset(DataMatrix(data.X), clusters);
      rec.data_hash = hash_matrix(X.values());
      const auto result = method == Method::pssc ? run(X, clusters, params)
                                                 : run_ssc_baseline(X, clusters, params);
      rec.error = misclassification(result.labels, data.truth, clusters);
      rec.ssr = ssr_error(result.Z, data.truth, clusters);
      rec.iterations = result.iterations;
      rec.stop_reason = result.stop_reason;
      rec.kappa_trace = kappas(result);
      rec.error_trace = errors_per_iteration(result, data.truth, clusters);
    } catch (const std::exception& e) {
      rec.failed = true;
      rec.failure = e.what();
    }
    out.records.push_back(std::move(rec));
  }

  if (grid.kappa_decay_iterations > 0) {
    out.has_decay = true;
    auto& rec = out.decay;
    rec.clusters = clusters;
    rec.ratio = ratio;
    rec.trial = trial;
    rec.seed = seed;
    rec.points = static_cast<int>(data.X.cols());
    if (!setup_error.empty()) {
      rec.failed = true;
      rec.failure = setup_error;
    } else {
      try {
        HyperParams decay_params = params;
        decay_params.early_stop = false;
        decay_params.t_max = grid.kappa_decay_iterations;
        const DataMatrix X = validate_dataset(DataMatrix(data.X), clusters);
        const auto result = run(X, clusters, decay_params);
        rec.kappa_trace = kappas(result);
        rec.error_trace = errors_per_iteration(result, data.truth, clusters);
      } catch (const std::exception& e) {
        rec.failed = true;
        rec.failure = e.what();
      }
    }
  }
  return out;
}

}  // namespace

void summarize(BenchmarkTable& table) {
  table.cells.clear();
  table.decay_cells.clear();
  const auto& grid = table.grid;
  for (int C : grid.clusters) {
    for (double ratio : grid.ratios) {
      for (Method method : grid.methods) {
        CellSummary cell;
        cell.clusters = C;
        cell.ratio = ratio;
        cell.method = method;
        std::vector<double> errors, ssrs;
        std::vector<std::vector<double>> error_traces, kappa_traces;
        double iterations = 0.0;
        for (const auto& r : table.trials) {
          if (r.clusters != C || r.ratio != ratio || r.method != method) continue;
          if (r.failed) {
            ++cell.trials_failed;
            continue;
          }
          ++cell.trials_ok;
          errors.push_back(r.error);
          ssrs.push_back(r.ssr);
          iterations += r.iterations;
          error_traces.push_back(r.error_trace);
          std::vector<double> frac;
          for (int k : r.kappa_trace) frac.push_back(static_cast<double>(k) / r.points);
          kappa_traces.push_back(std::move(frac));
        }
        if (cell.trials_ok > 0) {
          const double n = cell.trials_ok;
          for (double e : errors) cell.mean_error += e / n;
          for (double s : ssrs) cell.mean_ssr += s / n;
          cell.median_error = median(errors);
          cell.median_ssr = median(ssrs);
          cell.mean_iterations = iterations / n;
          cell.mean_error_trace = mean_padded_trace(error_traces);
          cell.mean_kappa_fraction_trace = mean_padded_trace(kappa_traces);
        }
        table.cells.push_back(std::move(cell));
      }

      if (grid.kappa_decay_iterations > 0) {
        KappaDecaySummary cell;
        cell.clusters = C;
        cell.ratio = ratio;
        std::vector<std::vector<double>> error_traces, kappa_traces;
        for (const auto& r : table.decay) {
          if (r.clusters != C || r.ratio != ratio) continue;
          if (r.failed) {
            ++cell.trials_failed;
            continue;
          }
          ++cell.trials_ok;
          error_traces.push_back(r.error_trace);
          std::vector<double> frac;
          for (int k : r.kappa_trace) frac.push_back(static_cast<double>(k) / r.points);
          kappa_traces.push_back(std::move(frac));
        }
        cell.mean_error_trace = mean_padded_trace(error_traces);
        cell.mean_kappa_fraction_trace = mean_padded_trace(kappa_traces);
        table.decay_cells.push_back(std::move(cell));
      }
    }
  }
}

BenchmarkTable run_benchmark(const BenchmarkGrid& grid, const HyperParams& params) {
  if (grid.clusters.empty() || grid.ratios.empty() || grid.methods.empty()) {
    throw DimensionError("benchmark grid is empty");
  }
  if (grid.trials < 1) throw DimensionError("trial count must be positive");
  if (grid.workers < 1) throw DimensionError("workers must be positive");
  params.validate();

  struct Job {
    int clusters;
    double ratio;
    int trial;
  };
  std::vector<Job> jobs;
  for (int C : grid.clusters) {
    for (double ratio : grid.ratios) {
      for (int t = 0; t < grid.trials; ++t) jobs.push_back({C, ratio, t});
    }
  }

  HyperParams inner = params;
  if (grid.workers > 1) inner.workers = 1;
  std::vector<TrialOutput> outputs(jobs.size());
  parallel_for(jobs.size(), grid.workers, [&](std::size_t k) {
    outputs[k] = run_trial(grid, inner, jobs[k].clusters, jobs[k].ratio, jobs[k].trial);
  });

  BenchmarkTable table;
  table.grid = grid;
  table.params = params;
  for (auto& o : outputs) {
    for (auto& r : o.records) table.trials.push_back(std::move(r));
    if (o.has_decay) table.decay.push_back(std::move(o.decay));
  }
  summarize(table);
  return table;
}

}  // namespace pssc
