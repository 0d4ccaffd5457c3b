#include "thoops/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

#include "thoops/error.hpp"
#include "thoops/random.hpp"

namespace thoops {

namespace {

double squared_distance(const Matrix& points, Eigen::Index i, const Matrix& centroids,
                        Eigen::Index c) {
    return (points.row(i) - centroids.row(c)).squaredNorm();
}

Matrix plus_plus_seeds(const Matrix& points, std::size_t k, Rng& rng) {
    const Eigen::Index n = points.rows();
    Matrix centroids(static_cast<Eigen::Index>(k), points.cols());
    centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.index(static_cast<std::size_t>(n))));
    std::vector<double> d2(static_cast<std::size_t>(n), std::numeric_limits<double>::infinity());
    for (std::size_t c = 1; c < k; ++c) {
        const auto prev = static_cast<Eigen::Index>(c - 1);
        double total = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            auto& d = d2[static_cast<std::size_t>(i)];
            d = std::min(d, squared_distance(points, i, centroids, prev));
            total += d;
        }
        const std::size_t pick = total > 0.0 ? rng.weighted(d2)
                                             : rng.index(static_cast<std::size_t>(n));
        centroids.row(static_cast<Eigen::Index>(c)) = points.row(static_cast<Eigen::Index>(pick));
    }
    return centroids;
}

struct LloydRun {
    std::vector<std::size_t> labels;
    Matrix centroids;
    double wcss = 0.0;
    std::vector<double> trace;
};

LloydRun lloyd(const Matrix& points, Matrix centroids, int max_iters) {
    const Eigen::Index n = points.rows();
    const Eigen::Index k = centroids.rows();
    LloydRun run;
    run.labels.assign(static_cast<std::size_t>(n), 0);
    std::vector<double> dist(static_cast<std::size_t>(n), 0.0);
    bool first = true;
    for (int it = 0; it < max_iters; ++it) {
        bool changed = first;
        first = false;
        for (Eigen::Index i = 0; i < n; ++i) {
            std::size_t best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (Eigen::Index c = 0; c < k; ++c) {
                const double d = squared_distance(points, i, centroids, c);
                if (d < best_d) {
                    best_d = d;
                    best = static_cast<std::size_t>(c);
                }
            }
            auto& label = run.labels[static_cast<std::size_t>(i)];
            if (label != best) changed = true;
            label = best;
            dist[static_cast<std::size_t>(i)] = best_d;
        }

        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 0);
        for (std::size_t l : run.labels) ++counts[l];
        for (Eigen::Index c = 0; c < k; ++c) {
            if (counts[static_cast<std::size_t>(c)] > 0) continue;
            // Farthest point among clusters that can spare one.
            Eigen::Index far = -1;
            double far_d = -1.0;
            for (Eigen::Index i = 0; i < n; ++i) {
                const std::size_t l = run.labels[static_cast<std::size_t>(i)];
                if (counts[l] > 1 && dist[static_cast<std::size_t>(i)] > far_d) {
                    far_d = dist[static_cast<std::size_t>(i)];
                    far = i;
                }
            }
            if (far < 0) break;
            --counts[run.labels[static_cast<std::size_t>(far)]];
            run.labels[static_cast<std::size_t>(far)] = static_cast<std::size_t>(c);
            counts[static_cast<std::size_t>(c)] = 1;
            dist[static_cast<std::size_t>(far)] = 0.0;
            changed = true;
        }

        Matrix sums = Matrix::Zero(k, points.cols());
        for (Eigen::Index i = 0; i < n; ++i) {
            sums.row(static_cast<Eigen::Index>(run.labels[static_cast<std::size_t>(i)])) +=
                points.row(i);
        }
        for (Eigen::Index c = 0; c < k; ++c) {
            const std::size_t cnt = counts[static_cast<std::size_t>(c)];
            if (cnt > 0) centroids.row(c) = sums.row(c) / static_cast<double>(cnt);
        }
        double wcss = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            wcss += squared_distance(points, i, centroids,
                                     static_cast<Eigen::Index>(run.labels[static_cast<std::size_t>(i)]));
        }
        run.trace.push_back(wcss);
        run.wcss = wcss;
        if (!changed) break;
    }
    run.centroids = std::move(centroids);
    return run;
}

// Pairwise Euclidean distances of the selected rows, stored as float.
class DistanceTable {
public:
    DistanceTable(const Matrix& points, const std::vector<Eigen::Index>& rows)
        : n_(rows.size()), d_(n_ * n_, 0.0f) {
        Matrix sub(static_cast<Eigen::Index>(n_), points.cols());
        for (std::size_t r = 0; r < n_; ++r) sub.row(static_cast<Eigen::Index>(r)) = points.row(rows[r]);
        const Vector norms = sub.rowwise().squaredNorm();
        const Matrix gram = sub * sub.transpose();
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = i + 1; j < n_; ++j) {
                const auto ii = static_cast<Eigen::Index>(i);
                const auto jj = static_cast<Eigen::Index>(j);
                double sq = norms(ii) + norms(jj) - 2.0 * gram(ii, jj);
                if (sq < 0.0) sq = 0.0;
                // The Gram shortcut loses precision for near-coincident points.
                if (sq < 1e-8 * (norms(ii) + norms(jj))) {
                    sq = (sub.row(ii) - sub.row(jj)).squaredNorm();
                }
                const auto d = static_cast<float>(std::sqrt(sq));
                d_[i * n_ + j] = d;
                d_[j * n_ + i] = d;
            }
    }

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    bool all_zero() const {
        return std::all_of(d_.begin(), d_.end(), [](float x) { return x == 0.0f; });
    }

private:
    std::size_t n_;
    std::vector<float> d_;
};

double silhouette_from(const DistanceTable& dist, const std::vector<std::size_t>& labels) {
    const std::size_t n = dist.size();
    std::unordered_map<std::size_t, std::size_t> compact;
    std::vector<std::size_t> lab(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, inserted] = compact.emplace(labels[i], compact.size());
        lab[i] = it->second;
    }
    const std::size_t clusters = compact.size();
    if (clusters < 2) throw UsageError("silhouette needs at least two clusters");
    std::vector<std::size_t> sizes(clusters, 0);
    for (std::size_t l : lab) ++sizes[l];

    std::vector<double> sums(clusters);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (sizes[lab[i]] == 1) continue;
        std::fill(sums.begin(), sums.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) sums[lab[j]] += dist(i, j);
        const double a = sums[lab[i]] / static_cast<double>(sizes[lab[i]] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < clusters; ++c) {
            if (c != lab[i]) b = std::min(b, sums[c] / static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

std::vector<Eigen::Index> all_rows(Eigen::Index n) {
    std::vector<Eigen::Index> rows(static_cast<std::size_t>(n));
    std::iota(rows.begin(), rows.end(), Eigen::Index{0});
    return rows;
}

}  // namespace

KMeansResult kmeans(const Matrix& points, std::size_t k, std::uint64_t seed, int restarts,
                    int max_iters) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (k == 0) throw UsageError("kmeans: k must be positive");
    if (k > n) {
        throw UsageError("kmeans: k = " + std::to_string(k) + " exceeds point count " +
                         std::to_string(n));
    }
    if (restarts < 1 || max_iters < 1) throw UsageError("kmeans: restarts and max_iters must be positive");

    KMeansResult best;
    best.wcss = std::numeric_limits<double>::infinity();
    for (int r = 0; r < restarts; ++r) {
        Rng rng(split_seed(seed, static_cast<std::uint64_t>(r)));
        LloydRun run = lloyd(points, plus_plus_seeds(points, k, rng), max_iters);
        if (run.wcss < best.wcss) {
            best.labels = std::move(run.labels);
            best.centroids = std::move(run.centroids);
            best.wcss = run.wcss;
            best.wcss_trace = std::move(run.trace);
        }
    }
    return best;
}

double silhouette(const Matrix& points, const std::vector<std::size_t>& labels) {
    if (labels.size() != static_cast<std::size_t>(points.rows())) {
        throw UsageError("silhouette: label count does not match point count");
    }
    return silhouette_from(DistanceTable(points, all_rows(points.rows())), labels);
}

SilhouetteProfile max_silhouette(const Matrix& points, const SilhouetteConfig& config) {
    const auto n = static_cast<std::size_t>(points.rows());
    if (n < 3) throw UsageError("max_silhouette needs at least 3 points");
    if (config.max_k < 2) throw UsageError("max_silhouette: K must be at least 2");

    std::vector<Eigen::Index> rows = all_rows(points.rows());
    if (n > config.sample_limit) {
        // Seeded partial Fisher-Yates; sorted to keep row order stable.
        Rng rng(split_seed(config.seed, 0x5157ULL));
        for (std::size_t i = 0; i < config.sample_limit; ++i) {
            std::swap(rows[i], rows[i + rng.index(n - i)]);
        }
        rows.resize(config.sample_limit);
        std::sort(rows.begin(), rows.end());
    }
    const DistanceTable dist(points, rows);

    SilhouetteProfile profile;
    profile.no_structure = dist.all_zero();
    profile.max_value = -std::numeric_limits<double>::infinity();
    const std::size_t k_max = std::min(config.max_k, n);
    for (std::size_t k = 2; k <= k_max; ++k) {
        const KMeansResult km = kmeans(points, k, split_seed(config.seed, k), config.restarts);
        std::vector<std::size_t> sub(rows.size());
        for (std::size_t r = 0; r < rows.size(); ++r) sub[r] = km.labels[static_cast<std::size_t>(rows[r])];
        // A subsample may miss all but one cluster; that clustering separates nothing.
        const bool separable =
            std::any_of(sub.begin(), sub.end(), [&](std::size_t l) { return l != sub.front(); });
        const double s = separable ? silhouette_from(dist, sub) : 0.0;
        profile.values[k] = s;
        if (s > profile.max_value) {
            profile.max_value = s;
            profile.argmax_k = k;
        }
    }
    return profile;
}

double adjusted_rand_index(const std::vector<std::size_t>& lhs,
                           const std::vector<std::size_t>& rhs) {
    if (lhs.size() != rhs.size()) throw UsageError("adjusted_rand_index: length mismatch");
    const std::size_t n = lhs.size();
    std::map<std::pair<std::size_t, std::size_t>, double> joint;
    std::map<std::size_t, double> left;
    std::map<std::size_t, double> right;
    for (std::size_t i = 0; i < n; ++i) {
        joint[{lhs[i], rhs[i]}] += 1.0;
        left[lhs[i]] += 1.0;
        right[rhs[i]] += 1.0;
    }
    auto pairs = [](double m) { return m * (m - 1.0) / 2.0; };
    double index = 0.0;
    for (const auto& [key, m] : joint) index += pairs(m);
    double sum_left = 0.0;
    for (const auto& [key, m] : left) sum_left += pairs(m);
    double sum_right = 0.0;
    for (const auto& [key, m] : right) sum_right += pairs(m);
    const double total = pairs(static_cast<double>(n));
    const double expected = total > 0.0 ? sum_left * sum_right / total : 0.0;
    const double maximum = 0.5 * (sum_left + sum_right);
    if (maximum == expected) return 1.0;
    return (index - expected) / (maximum - expected);
}

}  // namespace thoops
