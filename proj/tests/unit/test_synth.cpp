#include "../oracles.hpp"

#include "pssc/errors.hpp"
#include "pssc/io.hpp"
#include "pssc/synth.hpp"

#include <doctest.h>

#include <Eigen/SVD>

using namespace pssc;

namespace {

double smallest_principal_angle_cos_gap(const Matrix& a, const Matrix& b) {
  Eigen::JacobiSVD<Matrix> svd(a.transpose() * b);
  return 1.0 - svd.singularValues()(0);
}

BenchmarkGrid tiny_grid() {
  BenchmarkGrid g;
  g.clusters = {2};
  g.ratios = {0.5};
  g.trials = 3;
  g.base_seed = 5;
  g.ambient_dim = 30;
  g.dim = 4;
  g.points_per_subspace = 15;
  return g;
}

}  // namespace

TEST_CASE("bases are orthonormal and share the intersection") {
  const auto m = generate_subspaces(3, 200, 10, 5, 100, 1);
  REQUIRE(m.bases.size() == 3);
  for (const auto& B : m.bases) {
    CHECK((B.transpose() * B - Matrix::Identity(10, 10)).cwiseAbs().maxCoeff() <= 1e-10);
  }
  for (int j = 1; j < 3; ++j)
    CHECK(m.bases[j].leftCols(5) == m.bases[0].leftCols(5));
  Matrix all(200, 30);
  all << m.bases[0], m.bases[1], m.bases[2];
  CHECK(oracle::numeric_rank(all) == 5 + 3 * 5);
}

TEST_CASE("s = d - 1 leaves a (d-1)-dimensional intersection") {
  const auto m = generate_subspaces(2, 50, 6, 5, 10, 2);
  Matrix both(50, 12);
  both << m.bases[0], m.bases[1];
  CHECK(oracle::numeric_rank(both) == 7);
}

TEST_CASE("s = 0 gives subspaces without a common direction") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    const auto m = generate_subspaces(3, 200, 10, 0, 10, s);
    for (int a = 0; a < 3; ++a)
      for (int b = a + 1; b < 3; ++b)
        CHECK(smallest_principal_angle_cos_gap(m.bases[a], m.bases[b]) > 1e-6);
  }
}

TEST_CASE("generator preconditions") {
  CHECK_THROWS_AS(generate_subspaces(1, 20, 4, 1, 5, 0), DimensionError);
  CHECK_THROWS_AS(generate_subspaces(2, 20, 4, 4, 5, 0), DimensionError);
  CHECK_THROWS_AS(generate_subspaces(2, 3, 4, 1, 5, 0), DimensionError);
  CHECK_THROWS_AS(intersection_dim_for(1.0, 10), DimensionError);
  CHECK(intersection_dim_for(0.5, 10) == 5);
  CHECK(intersection_dim_for(0.9, 10) == 9);
  CHECK(intersection_dim_for(0.4, 10) == 4);
}

TEST_CASE("samples lie on the unit sphere of their subspace") {
  const auto m = generate_subspaces(3, 60, 5, 2, 40, 3);
  const auto d = sample_points(m, 4);
  REQUIRE(d.X.cols() == 120);
  for (Index i = 0; i < 120; ++i) {
    const Matrix& B = m.bases[d.truth[i]];
    const Vector p = d.X.col(i);
    CHECK((p - B * (B.transpose() * p)).norm() <= 1e-10);
    CHECK(std::abs(p.norm() - 1.0) <= 1e-12);
    CHECK(d.truth[i] == int(i / 40));
  }
}

TEST_CASE("sample mean on one subspace is near zero") {
  const auto m = generate_subspaces(2, 20, 10, 0, 10000, 6);
  const auto d = sample_points(m, 7);
  const Vector mean = d.X.leftCols(10000).rowwise().mean();
  CHECK(mean.norm() <= 0.05);
}

TEST_CASE("trial seeds are pure and distinct") {
  CHECK(trial_seed(1, 2, 0.5, 3) == trial_seed(1, 2, 0.5, 3));
  CHECK(trial_seed(1, 2, 0.5, 3) != trial_seed(1, 2, 0.5, 4));
  CHECK(trial_seed(1, 2, 0.5, 3) != trial_seed(1, 2, 0.6, 3));
  CHECK(trial_seed(1, 2, 0.5, 3) != trial_seed(1, 3, 0.5, 3));
  CHECK(trial_seed(1, 2, 0.5, 3) != trial_seed(2, 2, 0.5, 3));
}

TEST_CASE("benchmark records are paired, complete and reproducible") {
  const auto grid = tiny_grid();
  HyperParams params;
  const auto a = run_benchmark(grid, params);
  CHECK(a.trials.size() == 6);
  for (int t = 0; t < 3; ++t) {
    const auto& p = a.trials[2 * t];
    const auto& s = a.trials[2 * t + 1];
    CHECK(p.method == Method::pssc);
    CHECK(s.method == Method::ssc);
    CHECK(p.data_hash == s.data_hash);
    CHECK(p.seed == trial_seed(5, 2, 0.5, t));
    CHECK_FALSE(p.failed);
  }
  REQUIRE(a.cells.size() == 2);
  for (const auto& c : a.cells) CHECK(c.trials_ok == 3);

  // aggregates recomputed from raw values
  std::vector<double> errs;
  for (const auto& r : a.trials)
    if (r.method == Method::pssc) errs.push_back(r.error);
  CHECK(a.cells[0].mean_error == doctest::Approx((errs[0] + errs[1] + errs[2]) / 3.0));
  CHECK(a.cells[0].median_error == median(errs));

  const auto b = run_benchmark(grid, params);
  CHECK(benchmark_raw_csv(a) == benchmark_raw_csv(b));

  auto g4 = grid;
  g4.workers = 4;
  CHECK(benchmark_raw_csv(run_benchmark(g4, params)) == benchmark_raw_csv(a));
}

TEST_CASE("kappa decay runs ignore the early stop") {
  auto grid = tiny_grid();
  grid.trials = 2;
  grid.kappa_decay_iterations = 6;
  const auto t = run_benchmark(grid, HyperParams{});
  REQUIRE(t.decay.size() == 2);
  for (const auto& d : t.decay) CHECK(d.kappa_trace.size() == 6);
  REQUIRE(t.decay_cells.size() == 1);
  CHECK(t.decay_cells[0].mean_kappa_fraction_trace.size() == 6);
}

TEST_CASE("padded trace mean and median") {
  CHECK(mean_padded_trace({{1.0, 0.5}, {3.0}}) == std::vector<double>{2.0, 1.75});
  CHECK(median({3.0, 1.0, 2.0}) == 2.0);
  CHECK(median({4.0, 1.0, 2.0, 3.0}) == 2.5);
}

TEST_CASE("matrix hash sees every entry") {
  Matrix m = Matrix::Zero(3, 3);
  const auto h = hash_matrix(m);
  m(2, 1) = 1e-300;
  CHECK(hash_matrix(m) != h);
}
