#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "thoops/cluster.hpp"
#include "thoops/cp_kl.hpp"
#include "thoops/tensor.hpp"

namespace thoops {

struct RankSelectConfig {
    std::size_t K = 10;
    double epsilon = 0.02;
    std::vector<std::size_t> f_grid;
    int restarts = 10;
    std::uint64_t seed = 0;
    /// Optional floor on max silhouette (e.g. 0.7 for "strong structure").
    std::optional<double> min_silhouette;
    std::size_t sample_limit = 5000;
    /// Number of grid points evaluated concurrently.
    unsigned jobs = 1;

    void validate() const;
    SilhouetteConfig silhouette_config(std::uint64_t stream) const;
};

/// Slice features along `mode`: row i is X(i,:,:) flattened in the column
/// order of unfold(tensor, mode).
Matrix raw_features(const SparseCountTensor& tensor, Mode mode);

struct RankScore {
    std::size_t rank = 0;
    SilhouetteProfile profile;
    bool qualifies = false;
};

struct RankSelection {
    std::size_t chosen_rank = 0;
    /// No grid point met the rule; chosen_rank is the best-silhouette rank.
    bool no_qualifier = false;
    SilhouetteProfile raw;
    std::vector<RankScore> table;
};

/// Smallest grid rank F whose factor embeddings separate at least as well
/// as the raw slices and whose max silhouette moves by less than epsilon
/// at the next grid rank:
///
///     maxS_raw <= maxS_F  and  |maxS_next - maxS_F| < epsilon
///
/// The last grid point has no successor and satisfies the second clause
/// vacuously. If nothing qualifies, or the raw slices are all identical,
/// the argmax rank is returned with `no_qualifier` set.
///
/// Seeds: the fit for rank F uses split_seed(fit_config.seed, F); the
/// clustering for rank F uses split_seed(config.seed, F) and the raw
/// baseline split_seed(config.seed, 0).
RankSelection select_rank(const SparseCountTensor& tensor, Mode mode,
                          const RankSelectConfig& config, const FitConfig& fit_config);

}  // namespace thoops
