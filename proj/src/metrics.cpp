#include "pssc/metrics.hpp"

#include "pssc/errors.hpp"

#include <cmath>
#include <limits>

namespace pssc {

namespace {

void check_labels(const Labels& labels, int clusters) {
  for (int l : labels) {
    if (l < 0 || l >= clusters) throw DimensionError("label out of range");
  }
}

}  // namespace

ConfusionMatrix confusion_matrix(const Labels& pred, const Labels& truth, int clusters) {
  if (pred.size() != truth.size()) throw DimensionError("label vectors differ in length");
  if (clusters < 1) throw DimensionError("cluster count must be positive");
  check_labels(pred, clusters);
  check_labels(truth, clusters);
  ConfusionMatrix counts = ConfusionMatrix::Zero(clusters, clusters);
  for (std::size_t i = 0; i < pred.size(); ++i) ++counts(pred[i], truth[i]);
  return counts;
}

std::vector<int> max_weight_assignment(const ConfusionMatrix& profit) {
  const auto n = static_cast<int>(profit.rows());
  if (profit.cols() != n) throw DimensionError("assignment matrix must be square");
  if (n == 0) return {};

  // Shortest augmenting path with potentials on cost = max - profit; 1-based.
  const long long top = profit.maxCoeff();
  auto cost = [&](int r, int c) { return top - profit(r - 1, c - 1); };
  constexpr long long inf = std::numeric_limits<long long>::max() / 4;
  std::vector<long long> u(n + 1, 0), v(n + 1, 0), minv(n + 1);
  std::vector<int> match(n + 1, 0), way(n + 1, 0);
  std::vector<bool> used(n + 1);
  for (int r = 1; r <= n; ++r) {
    match[0] = r;
    int c0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), false);
    do {
      used[c0] = true;
      const int r0 = match[c0];
      long long delta = inf;
      int c1 = 0;
      for (int c = 1; c <= n; ++c) {
        if (used[c]) continue;
        const long long cur = cost(r0, c) - u[r0] - v[c];
        if (cur < minv[c]) {
          minv[c] = cur;
          way[c] = c0;
        }
        if (minv[c] < delta) {
          delta = minv[c];
          c1 = c;
        }
      }
      for (int c = 0; c <= n; ++c) {
        if (used[c]) {
          u[match[c]] += delta;
          v[c] -= delta;
        } else {
          minv[c] -= delta;
        }
      }
      c0 = c1;
    } while (match[c0] != 0);
    do {
      const int c1 = way[c0];
      match[c0] = match[c1];
      c0 = c1;
    } while (c0 != 0);
  }

  std::vector<int> perm(n, 0);
  for (int c = 1; c <= n; ++c) perm[match[c] - 1] = c - 1;
  return perm;
}

std::vector<int> best_label_matching(const Labels& pred, const Labels& truth, int clusters) {
  return max_weight_assignment(confusion_matrix(pred, truth, clusters));
}

long long best_agreement(const Labels& pred, const Labels& truth, int clusters) {
  const auto counts = confusion_matrix(pred, truth, clusters);
  const auto perm = max_weight_assignment(counts);
  long long total = 0;
  for (int k = 0; k < clusters; ++k) total += counts(k, perm[k]);
  return total;
}

double misclassification(const Labels& pred, const Labels& truth, int clusters) {
  if (pred.empty()) throw DimensionError("label vectors are empty");
  const auto n = static_cast<long long>(pred.size());
  return static_cast<double>(n - best_agreement(pred, truth, clusters)) /
         static_cast<double>(n);
}

double ssr_error(const Matrix& Z, const Labels& truth, int clusters) {
  const Index N = Z.cols();
  if (Z.rows() != N || static_cast<Index>(truth.size()) != N || N == 0) {
    throw DimensionError("Z must be N x N with N truth labels");
  }
  check_labels(truth, clusters);
  double recovered = 0.0;
  for (Index i = 0; i < N; ++i) {
    const int own = truth[static_cast<std::size_t>(i)];
    double inside = 0.0;
    double total = 0.0;
    for (Index j = 0; j < N; ++j) {
      const double a = std::abs(Z(j, i));
      total += a;
      if (truth[static_cast<std::size_t>(j)] == own) inside += a;
    }
    if (total > 0.0) recovered += inside / total;
  }
  return 1.0 - recovered / static_cast<double>(N);
}

}  // namespace pssc
