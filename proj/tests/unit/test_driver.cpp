#include "../oracles.hpp"

#include "pssc/driver.hpp"
#include "pssc/metrics.hpp"
#include "pssc/solver.hpp"
#include "pssc/synth.hpp"

#include <doctest.h>

using namespace pssc;

namespace {

SoftAssignment make_assignment(const Matrix& phi, std::vector<bool> certain) {
  SoftAssignment sa;
  sa.phi = phi;
  sa.P = phi;
  sa.certain = std::move(certain);
  sa.kappa = 0;
  for (bool c : sa.certain) sa.kappa += !c;
  return sa;
}

SampledData synthetic(int C, double ratio, std::uint64_t seed, int n = 60, int d = 5,
                      int per = 30) {
  const auto model = generate_subspaces(C, n, d, intersection_dim_for(ratio, d), per, seed);
  return sample_points(model, seed + 1);
}

}  // namespace

TEST_CASE("stopping clauses in order") {
  Matrix phi(3, 2);
  phi << 1, 0, 0.5, 0.5, 0, 1;
  const auto a = make_assignment(phi, {true, false, true});
  CHECK(stopping_check(nullptr, a, 1, 10) == std::nullopt);
  CHECK(stopping_check(&a, a, 2, 10) == StopReason::phi_fixed_point);

  Matrix phi2 = phi;
  phi2.row(1) << 0.4, 0.6;
  const auto b = make_assignment(phi2, {true, false, true});
  CHECK(stopping_check(&a, b, 2, 10) == StopReason::kappa_nondecreasing);

  Matrix phi3 = phi;
  phi3.row(1) << 1.0, 0.0;
  const auto c = make_assignment(phi3, {true, true, true});
  CHECK(stopping_check(&a, c, 2, 10) == std::nullopt);
  CHECK(stopping_check(&a, c, 10, 10) == StopReason::t_max_reached);
  CHECK(stopping_check(&a, a, 3, 10, false) == std::nullopt);
  CHECK(stopping_check(&a, a, 10, 10, false) == StopReason::t_max_reached);

  // within 1e-12 counts as equal, but only with identical certain masks
  Matrix near = phi;
  near(1, 0) += 5e-13;
  near(1, 1) -= 5e-13;
  CHECK(stopping_check(&a, make_assignment(near, {true, false, true}), 2, 10) ==
        StopReason::phi_fixed_point);
}

TEST_CASE("coverage check") {
  Matrix phi(3, 3);
  phi << 1, 0, 0, 0, 1, 0, 0.2, 0.3, 0.5;
  CHECK_FALSE(covers_all_clusters(make_assignment(phi, {true, true, false})));
  phi.row(2) << 0, 0, 1;
  CHECK(covers_all_clusters(make_assignment(phi, {true, true, true})));
}

TEST_CASE("two orthogonal lines converge at t = 2 without errors") {
  Matrix m = Matrix::Zero(2, 10);
  const double sign[5] = {1, -1, 1, 1, -1};
  for (int j = 0; j < 5; ++j) m(0, j) = sign[j];
  for (int j = 0; j < 5; ++j) m(1, 5 + j) = sign[4 - j];
  Labels truth(10, 0);
  for (int j = 5; j < 10; ++j) truth[j] = 1;
  const DataMatrix X = validate_dataset(DataMatrix(m), 2);
  const auto r = run(X, 2, HyperParams{});
  CHECK(r.iterations == 2);
  CHECK(r.history.back().kappa == 0);
  CHECK(r.stop_reason == StopReason::phi_fixed_point);
  CHECK(misclassification(r.labels, truth, 2) == 0.0);
}

TEST_CASE("t_max = 1 is the baseline") {
  for (std::uint64_t s = 0; s < 4; ++s) {
    const auto data = synthetic(2 + int(s % 2), 0.5, 100 + s);
    const int C = 2 + int(s % 2);
    const DataMatrix X = validate_dataset(DataMatrix(data.X), C);
    HyperParams p;
    p.seed = s;
    const auto base = run_ssc_baseline(X, C, p);
    p.t_max = 1;
    const auto one = run(X, C, p);
    CHECK(base.labels == one.labels);
    CHECK(base.Z == one.Z);
    CHECK(base.iterations == 1);
    CHECK(base.stop_reason == StopReason::t_max_reached);
  }
}

TEST_CASE("first iteration state equals the baseline solve") {
  const auto data = synthetic(3, 0.4, 7);
  const DataMatrix X = validate_dataset(DataMatrix(data.X), 3);
  HyperParams p;
  const auto full = run(X, 3, p);
  const auto base = run_ssc_baseline(X, 3, p);
  CHECK(full.history.front().labels == base.labels);
  CHECK(full.history.front().objective == base.history.front().objective);
}

TEST_CASE("history is consistent with the stop reason") {
  for (std::uint64_t s = 0; s < 6; ++s) {
    const auto data = synthetic(2, 0.6, 300 + s);
    const DataMatrix X = validate_dataset(DataMatrix(data.X), 2);
    HyperParams p;
    p.seed = s;
    p.spectral_mode = s % 2 ? SpectralMode::full : SpectralMode::incremental;
    const auto r = run(X, 2, p);
    REQUIRE(int(r.history.size()) == r.iterations);
    for (int t = 0; t < r.iterations; ++t) CHECK(r.history[t].t == t + 1);
    CHECK(r.labels == r.history.back().labels);
    for (int l : r.labels) CHECK((l >= 0 && l < 2));
    if (r.stop_reason == StopReason::kappa_nondecreasing) {
      REQUIRE(r.iterations >= 2);
      CHECK(r.history[r.iterations - 1].kappa >= r.history[r.iterations - 2].kappa);
    }
    if (r.stop_reason == StopReason::t_max_reached && !r.rank_guard_tripped)
      CHECK(r.iterations == p.t_max);
    for (int t = 1; t < r.iterations; ++t) {
      if (p.spectral_mode == SpectralMode::full) CHECK_FALSE(r.history[t].incremental);
    }
  }
}

TEST_CASE("runs are deterministic and independent of worker count") {
  const auto data = synthetic(3, 0.5, 55);
  const DataMatrix X = validate_dataset(DataMatrix(data.X), 3);
  HyperParams p;
  p.seed = 9;
  const auto a = run(X, 3, p);
  const auto b = run(X, 3, p);
  p.workers = 4;
  const auto c = run(X, 3, p);
  CHECK(a.labels == b.labels);
  CHECK(a.Z == b.Z);
  CHECK(a.labels == c.labels);
  CHECK(a.Z == c.Z);
  CHECK(a.iterations == c.iterations);
}

TEST_CASE("objective recorded with the association used in that solve") {
  const auto data = synthetic(2, 0.5, 66);
  const DataMatrix X = validate_dataset(DataMatrix(data.X), 2);
  HyperParams p;
  p.t_max = 1;
  const auto r = run(X, 2, p);
  const double l0 = compute_lambda0(X, p.alpha);
  CHECK(r.history[0].objective ==
        doctest::Approx(objective_value(X.values(), r.Z, Matrix::Ones(60, 60), l0, l0 / 100.0)));
}
