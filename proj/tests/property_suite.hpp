#pragma once

// Randomized structural checks shared by the unit tests and the acceptance
// runner. Every case is seeded, so a failure is reproducible from its index.

#include "oracles.hpp"

#include "pssc/association.hpp"
#include "pssc/driver.hpp"
#include "pssc/metrics.hpp"
#include "pssc/rng.hpp"
#include "pssc/solver.hpp"

#include <map>
#include <string>

namespace props {

using namespace pssc;

struct Report {
  std::map<std::string, long> cases;
  std::map<std::string, long> failures;
  std::vector<std::string> first_failures;

  long total_cases() const {
    long n = 0;
    for (const auto& [k, v] : cases) n += v;
    return n;
  }
  long total_failures() const {
    long n = 0;
    for (const auto& [k, v] : failures) n += v;
    return n;
  }
  void record(const std::string& name, bool ok, std::uint64_t case_seed) {
    ++cases[name];
    if (!ok) {
      ++failures[name];
      if (first_failures.size() < 10)
        first_failures.push_back(name + " (case seed " + std::to_string(case_seed) + ")");
    }
  }
};

inline bool is_simplex_row(const Matrix& m, Index i) {
  double s = 0.0;
  for (Index k = 0; k < m.cols(); ++k) {
    if (m(i, k) < 0.0) return false;
    s += m(i, k);
  }
  return std::abs(s - 1.0) <= 1e-12;
}

inline void check_assignment(Report& rep, std::uint64_t base) {
  for (int c = 0; c < 3000; ++c) {
    const std::uint64_t seed = derive_seed(base, {1, std::uint64_t(c)});
    std::mt19937_64 rng(seed);
    const Index N = 1 + rng() % 30, C = 2 + rng() % 5;
    Matrix P = oracle::random_simplex_rows(N, C, rng);
    // sprinkle hard and uniform rows, which sit on the boundaries
    for (Index i = 0; i < N; ++i) {
      const auto roll = rng() % 6;
      if (roll == 0) P.row(i) = Vector::Unit(C, rng() % C);
      if (roll == 1) P.row(i).setConstant(1.0 / double(C));
    }

    const double omega = compute_omega(P);
    rep.record("omega in [0,1]", omega >= 0.0 && omega <= 1.0, seed);
    rep.record("omega matches double-loop sum",
               std::abs(omega - std::clamp(oracle::omega_double_loop(P), 0.0, 1.0)) <= 1e-10,
               seed);

    const double thr = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const SoftAssignment sa = build_soft_assignment(P, thr);
    bool simplex = true, consistent = true;
    int kappa = 0;
    for (Index i = 0; i < N; ++i) {
      simplex = simplex && is_simplex_row(sa.phi, i);
      Index top = 0;
      for (Index k = 1; k < C; ++k)
        if (P(i, k) > P(i, top)) top = k;
      const bool certain = P(i, top) >= thr;
      kappa += !certain;
      if (certain != sa.certain[i]) consistent = false;
      if (certain && (sa.phi.row(i) - Vector::Unit(C, top).transpose()).cwiseAbs().maxCoeff() != 0.0)
        consistent = false;
      if (!certain && sa.phi.row(i) != P.row(i)) consistent = false;
    }
    rep.record("phi rows on the simplex", simplex, seed);
    rep.record("phi rows follow the threshold rule", consistent && kappa == sa.kappa, seed);

    const double lo = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    const double hi = std::uniform_real_distribution<double>(lo, 1.0)(rng);
    rep.record("kappa monotone in the threshold",
               build_soft_assignment(P, lo).kappa <= build_soft_assignment(P, hi).kappa, seed);

    if (c < 2000) {
      const Matrix A = build_association(sa).A;
      const Matrix ref = oracle::product_triple_loop(sa.phi);
      bool ok = A.isApprox(A.transpose(), 0.0) && A.minCoeff() >= 0.0 && A.maxCoeff() <= 1.0;
      rep.record("A symmetric with entries in [0,1]", ok, seed);
      rep.record("A matches triple-loop product", (A - ref).cwiseAbs().maxCoeff() <= 1e-10,
                 seed);
    }
  }
}

inline void check_probabilities(Report& rep, std::uint64_t base) {
  for (int c = 0; c < 1000; ++c) {
    const std::uint64_t seed = derive_seed(base, {2, std::uint64_t(c)});
    std::mt19937_64 rng(seed);
    const Index N = 2 + rng() % 25;
    const int C = 2 + int(rng() % 4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix Z(N, N);
    for (Index i = 0; i < N; ++i)
      for (Index j = 0; j < N; ++j) Z(i, j) = u(rng) < 0.4 ? 0.0 : u(rng) - 0.5;
    Z.diagonal().setZero();
    const Matrix sim = similarity_from_coefficients(Z);
    Labels labels(N);
    for (auto& l : labels) l = int(rng() % C);

    bool ok = sim.isApprox(sim.transpose(), 0.0) && sim.minCoeff() >= 0.0;
    rep.record("similarity symmetric and nonnegative", ok, seed);

    const Probabilities pr = compute_probabilities(sim, labels, C);
    bool rows = true;
    for (Index i = 0; i < N; ++i) rows = rows && is_simplex_row(pr.P, i);
    rep.record("P rows on the simplex", rows, seed);

    const Index col = rng() % N;
    Matrix scaled = sim;
    scaled.col(col) *= 0.1 + 10.0 * u(rng);
    const Probabilities ps = compute_probabilities(scaled, labels, C);
    rep.record("P row invariant to column scaling",
               (ps.P.row(col) - pr.P.row(col)).cwiseAbs().maxCoeff() <= 1e-12, seed);
  }
}

inline void check_solver(Report& rep, std::uint64_t base) {
  HyperParams params;
  params.solver_tol = 1e-8;
  for (int c = 0; c < 600; ++c) {
    const std::uint64_t seed = derive_seed(base, {3, std::uint64_t(c)});
    std::mt19937_64 rng(seed);
    const Index n = 3 + rng() % 6, N = 4 + rng() % 10;
    std::normal_distribution<double> g;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Matrix Xm(n, N);
    for (Index i = 0; i < n; ++i)
      for (Index j = 0; j < N; ++j) Xm(i, j) = g(rng);
    for (Index j = 0; j < N; ++j) Xm.col(j).normalize();
    const DataMatrix X(Xm);
    Matrix A(N, N);
    for (Index i = 0; i < N; ++i)
      for (Index j = 0; j <= i; ++j) A(i, j) = A(j, i) = u(rng);
    const double lambda0 = compute_lambda0(X, 1.0 + 30.0 * u(rng));
    const SolveReport r =
        solve_self_representation(X, AssociationMatrix{A}, lambda0, lambda0 * u(rng), params);
    rep.record("diag(Z) = 0", r.state.Z.diagonal().cwiseAbs().maxCoeff() == 0.0, seed);
    const Matrix& S = r.state.Zbar;
    rep.record("Zbar symmetric and nonnegative",
               S.isApprox(S.transpose(), 0.0) && S.minCoeff() >= 0.0, seed);
    rep.record("E = X - XZ", (r.state.E - (Xm - Xm * r.state.Z)).cwiseAbs().maxCoeff() <= 1e-12,
               seed);
  }
}

inline void check_block_fixed_point(Report& rep, std::uint64_t base) {
  for (int c = 0; c < 100; ++c) {
    const std::uint64_t seed = derive_seed(base, {4, std::uint64_t(c)});
    std::mt19937_64 rng(seed);
    const int C = 2 + int(rng() % 2), dim = 2 + int(rng() % 2), per = 6 + int(rng() % 5);
    const auto blocks = oracle::orthogonal_blocks(C, dim, per, rng);
    HyperParams params;
    params.seed = seed;
    const DataMatrix X = validate_dataset(DataMatrix(blocks.X), C);
    const ClusteringResult res = run(X, C, params);
    const auto& last = res.history.back();
    const bool ok = last.kappa == 0 && std::abs(last.omega - 1.0) <= 1e-12 &&
                    misclassification(res.labels, blocks.truth, C) == 0.0;
    rep.record("orthogonal subspaces reach the hard fixed point", ok, seed);
  }
}

inline Report run_all(std::uint64_t base = 2024) {
  Report rep;
  check_assignment(rep, base);
  check_probabilities(rep, base);
  check_solver(rep, base);
  check_block_fixed_point(rep, base);
  return rep;
}

}  // namespace props
