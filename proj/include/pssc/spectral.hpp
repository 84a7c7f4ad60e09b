#pragma once

#include "pssc/core.hpp"

#include <cstdint>
#include <vector>

namespace pssc {

/// Rows are points in the span of the C lowest eigenvectors, scaled to unit
/// length. Rows that were exactly zero stay zero and are marked in `zero_rows`.
struct SpectralEmbedding {
  Matrix coords;
  Vector eigenvalues;
  std::vector<bool> zero_rows;
};

/// L = I - D^{-1/2} W D^{-1/2}. Zero-degree vertices keep an identity row.
Matrix normalized_laplacian(const Matrix& similarity);

/// Dense symmetric eigendecomposition; throws EigenFailure on non-convergence.
SpectralEmbedding spectral_embed(const Matrix& laplacian, int clusters);

struct KMeansResult {
  Labels labels;
  Matrix centroids;  // C x dim
  double wcss = 0.0;
  int iterations = 0;
};

/// k-means++ seeding followed by Lloyd iterations, best of `restarts` by
/// within-cluster sum of squares. Rows of `points` are observations.
KMeansResult kmeans(const Matrix& points, int clusters, std::uint64_t seed, int restarts,
                    int workers = 1);

inline KMeansResult kmeans(const SpectralEmbedding& embedding, int clusters,
                           std::uint64_t seed, int restarts, int workers = 1) {
  return kmeans(embedding.coords, clusters, seed, restarts, workers);
}

Labels cluster_full(const Matrix& similarity, int clusters, std::uint64_t seed,
                    int restarts, int workers = 1);

struct IncrementalResult {
  Labels labels;
  std::vector<Index> affected;
  bool fallback_to_full = false;
};

/// Points touched by the uncertain set: the uncertain points plus every point
/// sharing a nonzero similarity with one of them. Sorted ascending.
std::vector<Index> affected_points(const Matrix& similarity,
                                   const std::vector<Index>& uncertain);

/// Relabels only the affected points. Everything else keeps `prev_labels`.
/// Centroids come from the current labeling of the full embedding; if some
/// cluster has no fixed (unaffected) point the call falls back to
/// cluster_full and sets `fallback_to_full`.
IncrementalResult cluster_incremental(const Matrix& similarity, const Labels& prev_labels,
                                      const std::vector<Index>& uncertain, int clusters,
                                      std::uint64_t seed, int restarts, int workers = 1);

}  // namespace pssc
