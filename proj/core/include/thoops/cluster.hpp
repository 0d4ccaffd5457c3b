#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <vector>

#include "thoops/tensor.hpp"

namespace thoops {

/// Rows of `points` are observations. Euclidean distance throughout.
struct KMeansResult {
    std::vector<std::size_t> labels;
    Matrix centroids;  // k x d
    double wcss = 0.0;
    /// WCSS after each Lloyd iteration of the winning restart.
    std::vector<double> wcss_trace;
};

/// Lloyd's algorithm with k-means++ seeding; the best of `restarts` runs by
/// within-cluster sum of squares. Restart r draws from split_seed(seed, r).
/// An emptied cluster is re-seeded with the point farthest from its centroid.
KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, int restarts = 10,
                    int max_iters = 300);

/// Mean silhouette coefficient s(i) = (b(i) - a(i)) / max(a(i), b(i)).
/// Singleton clusters contribute 0. Throws UsageError with fewer than two
/// distinct labels.
double silhouette(const Matrix& points, const std::vector<std::size_t>& labels);

struct SilhouetteProfile {
    std::map<std::size_t, double> values;  // k -> mean silhouette
    double max_value = 0.0;
    std::size_t argmax_k = 0;
    /// All points coincide, so no partition separates anything.
    bool no_structure = false;
};

struct SilhouetteConfig {
    std::size_t max_k = 10;
    int restarts = 10;
    std::uint64_t seed = 0;
    /// Silhouettes are computed on a seeded subsample of at most this many
    /// points; k-means always sees every point.
    std::size_t sample_limit = 5000;
};

/// k-means + silhouette for every k in 2..min(max_k, n). Requires n >= 3.
SilhouetteProfile max_silhouette(const Matrix& points, const SilhouetteConfig& config);

/// Adjusted Rand index between two labelings of the same points.
double adjusted_rand_index(const std::vector<std::size_t>& lhs,
                           const std::vector<std::size_t>& rhs);

}  // namespace thoops
