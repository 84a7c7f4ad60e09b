#include "pssc/spectral.hpp"

#include "pssc/errors.hpp"
#include "pssc/parallel.hpp"
#include "pssc/rng.hpp"

#include <algorithm>
#include <limits>
#include <random>

namespace pssc {

namespace {

constexpr int kMaxLloydIterations = 300;

// Nearest centroid by squared distance; ties go to the lowest index.
int nearest(const Matrix& centroids, const Eigen::Ref<const Eigen::RowVectorXd>& x,
            double* dist_out = nullptr) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (Index k = 0; k < centroids.rows(); ++k) {
    const double d = (centroids.row(k) - x).squaredNorm();
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(k);
    }
  }
  if (dist_out != nullptr) *dist_out = best_d;
  return best;
}

Matrix seed_centroids(const Matrix& points, int clusters, Rng& rng) {
  const Index n = points.rows();
  Matrix centroids(clusters, points.cols());
  std::uniform_int_distribution<Index> pick(0, n - 1);
  centroids.row(0) = points.row(pick(rng));

  Vector d2(n);
  for (Index i = 0; i < n; ++i) d2[i] = (points.row(i) - centroids.row(0)).squaredNorm();
  for (int k = 1; k < clusters; ++k) {
    const double total = d2.sum();
    Index chosen = 0;
    if (total > 0.0) {
      std::uniform_real_distribution<double> u(0.0, total);
      double target = u(rng);
      chosen = n - 1;
      for (Index i = 0; i < n; ++i) {
        target -= d2[i];
        if (target < 0.0 && d2[i] > 0.0) {
          chosen = i;
          break;
        }
      }
    } else {
      chosen = pick(rng);
    }
    centroids.row(k) = points.row(chosen);
    for (Index i = 0; i < n; ++i) {
      d2[i] = std::min(d2[i], (points.row(i) - centroids.row(k)).squaredNorm());
    }
  }
  return centroids;
}

// Mean of each cluster's members. Empty clusters are reseeded at the point
// farthest from its current centroid; returns true if any reseed happened.
bool update_centroids(const Matrix& points, Labels& labels, Matrix& centroids) {
  const Index n = points.rows();
  const Index C = centroids.rows();
  Matrix sums = Matrix::Zero(C, points.cols());
  std::vector<Index> counts(static_cast<std::size_t>(C), 0);
  for (Index i = 0; i < n; ++i) {
    const auto k = labels[static_cast<std::size_t>(i)];
    sums.row(k) += points.row(i);
    ++counts[static_cast<std::size_t>(k)];
  }
  bool reseeded = false;
  for (Index k = 0; k < C; ++k) {
    if (counts[static_cast<std::size_t>(k)] > 0) {
      centroids.row(k) = sums.row(k) / static_cast<double>(counts[static_cast<std::size_t>(k)]);
      continue;
    }
    Index far = -1;
    double far_d = -1.0;
    for (Index i = 0; i < n; ++i) {
      const auto li = labels[static_cast<std::size_t>(i)];
      if (counts[static_cast<std::size_t>(li)] <= 1) continue;
      const double d = (points.row(i) - centroids.row(li)).squaredNorm();
      if (d > far_d) {
        far_d = d;
        far = i;
      }
    }
    if (far < 0) continue;
    --counts[static_cast<std::size_t>(labels[static_cast<std::size_t>(far)])];
    labels[static_cast<std::size_t>(far)] = static_cast<int>(k);
    counts[static_cast<std::size_t>(k)] = 1;
    centroids.row(k) = points.row(far);
    reseeded = true;
  }
  return reseeded;
}

double wcss_of(const Matrix& points, const Labels& labels, const Matrix& centroids) {
  double total = 0.0;
  for (Index i = 0; i < points.rows(); ++i) {
    total += (points.row(i) - centroids.row(labels[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return total;
}

KMeansResult lloyd(const Matrix& points, int clusters, std::uint64_t seed) {
  Rng rng(seed);
  KMeansResult out;
  out.centroids = seed_centroids(points, clusters, rng);
  out.labels.assign(static_cast<std::size_t>(points.rows()), -1);
  for (out.iterations = 0; out.iterations < kMaxLloydIterations;) {
    ++out.iterations;
    bool changed = false;
    for (Index i = 0; i < points.rows(); ++i) {
      const int k = nearest(out.centroids, points.row(i));
      if (k != out.labels[static_cast<std::size_t>(i)]) {
        out.labels[static_cast<std::size_t>(i)] = k;
        changed = true;
      }
    }
    const bool reseeded = update_centroids(points, out.labels, out.centroids);
    if (!changed && !reseeded) break;
  }
  out.wcss = wcss_of(points, out.labels, out.centroids);
  return out;
}

}  // namespace

Matrix normalized_laplacian(const Matrix& similarity) {
  if (similarity.rows() != similarity.cols()) {
    throw DimensionError("similarity matrix must be square");
  }
  const Vector degree = similarity.rowwise().sum();
  Vector inv_sqrt(degree.size());
  for (Index i = 0; i < degree.size(); ++i) {
    inv_sqrt[i] = degree[i] > 0.0 ? 1.0 / std::sqrt(degree[i]) : 0.0;
  }
  Matrix L = -(inv_sqrt.asDiagonal() * similarity * inv_sqrt.asDiagonal());
  L.diagonal().array() += 1.0;
  // Exact symmetry regardless of rounding in the scaling above.
  return 0.5 * (L + L.transpose());
}

SpectralEmbedding spectral_embed(const Matrix& laplacian, int clusters) {
  const Index N = laplacian.rows();
  if (clusters < 1 || clusters > N) {
    throw DimensionError("cluster count must lie in [1, N]");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(laplacian);
  if (eig.info() != Eigen::Success) {
    throw EigenFailure("symmetric eigensolver did not converge");
  }
  SpectralEmbedding out;
  out.eigenvalues = eig.eigenvalues().head(clusters);
  out.coords = eig.eigenvectors().leftCols(clusters);
  out.zero_rows.assign(static_cast<std::size_t>(N), false);
  for (Index i = 0; i < N; ++i) {
    const double norm = out.coords.row(i).norm();
    if (norm > 0.0) {
      out.coords.row(i) /= norm;
    } else {
      out.zero_rows[static_cast<std::size_t>(i)] = true;
    }
  }
  return out;
}

KMeansResult kmeans(const Matrix& points, int clusters, std::uint64_t seed, int restarts,
                    int workers) {
  if (clusters < 1 || clusters > points.rows()) {
    throw DimensionError("cluster count must lie in [1, number of points]");
  }
  if (restarts < 1) throw DimensionError("restarts must be positive");
  if (clusters == 1) {
    KMeansResult one;
    one.labels.assign(static_cast<std::size_t>(points.rows()), 0);
    one.centroids = points.colwise().mean();
    one.wcss = wcss_of(points, one.labels, one.centroids);
    return one;
  }

  std::vector<KMeansResult> runs(static_cast<std::size_t>(restarts));
  parallel_for(runs.size(), workers, [&](std::size_t r) {
    runs[r] = lloyd(points, clusters, derive_seed(seed, {r}));
  });
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r) {
    if (runs[r].wcss < runs[best].wcss) best = r;
  }
  return std::move(runs[best]);
}

Labels cluster_full(const Matrix& similarity, int clusters, std::uint64_t seed,
                    int restarts, int workers) {
  const auto embedding = spectral_embed(normalized_laplacian(similarity), clusters);
  return kmeans(embedding, clusters, seed, restarts, workers).labels;
}

std::vector<Index> affected_points(const Matrix& similarity,
                                   const std::vector<Index>& uncertain) {
  const Index N = similarity.rows();
  std::vector<bool> mark(static_cast<std::size_t>(N), false);
  for (Index i : uncertain) {
    if (i < 0 || i >= N) throw DimensionError("uncertain index out of range");
    mark[static_cast<std::size_t>(i)] = true;
    for (Index j = 0; j < N; ++j) {
      if (similarity(i, j) != 0.0) mark[static_cast<std::size_t>(j)] = true;
    }
  }
  std::vector<Index> out;
  for (Index i = 0; i < N; ++i) {
    if (mark[static_cast<std::size_t>(i)]) out.push_back(i);
  }
  return out;
}

IncrementalResult cluster_incremental(const Matrix& similarity, const Labels& prev_labels,
                                      const std::vector<Index>& uncertain, int clusters,
                                      std::uint64_t seed, int restarts, int workers) {
  const Index N = similarity.rows();
  if (static_cast<Index>(prev_labels.size()) != N) {
    throw DimensionError("previous labels must have one entry per point");
  }
  for (int l : prev_labels) {
    if (l < 0 || l >= clusters) throw DimensionError("previous label out of range");
  }

  IncrementalResult out;
  out.affected = affected_points(similarity, uncertain);
  out.labels = prev_labels;
  if (out.affected.empty()) return out;

  std::vector<bool> free(static_cast<std::size_t>(N), false);
  for (Index i : out.affected) free[static_cast<std::size_t>(i)] = true;
  std::vector<Index> fixed_count(static_cast<std::size_t>(clusters), 0);
  for (Index i = 0; i < N; ++i) {
    if (!free[static_cast<std::size_t>(i)]) ++fixed_count[static_cast<std::size_t>(prev_labels[static_cast<std::size_t>(i)])];
  }
  if (std::find(fixed_count.begin(), fixed_count.end(), 0) != fixed_count.end()) {
    out.labels = cluster_full(similarity, clusters, seed, restarts, workers);
    out.fallback_to_full = true;
    return out;
  }

  const auto embedding = spectral_embed(normalized_laplacian(similarity), clusters);
  const Matrix& pts = embedding.coords;

  auto centroids_of = [&](bool fixed_only) {
    Matrix sums = Matrix::Zero(clusters, pts.cols());
    Vector counts = Vector::Zero(clusters);
    for (Index i = 0; i < N; ++i) {
      if (fixed_only && free[static_cast<std::size_t>(i)]) continue;
      const auto k = out.labels[static_cast<std::size_t>(i)];
      sums.row(k) += pts.row(i);
      counts[k] += 1.0;
    }
    for (Index k = 0; k < clusters; ++k) sums.row(k) /= counts[k];
    return sums;
  };

  Matrix centroids = centroids_of(true);
  for (int iter = 0; iter < kMaxLloydIterations; ++iter) {
    bool changed = false;
    for (Index i : out.affected) {
      const int k = nearest(centroids, pts.row(i));
      if (k != out.labels[static_cast<std::size_t>(i)]) {
        out.labels[static_cast<std::size_t>(i)] = k;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;
    centroids = centroids_of(false);
  }
  return out;
}

}  // namespace pssc
