#include "thoops/rank_select.hpp"

#include <algorithm>
#include <cmath>
#include <future>

#include "thoops/error.hpp"
#include "thoops/random.hpp"

namespace thoops {

void RankSelectConfig::validate() const {
    if (K < 2) throw UsageError("K must be at least 2");
    if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
    if (f_grid.empty()) throw UsageError("rank grid is empty");
    if (f_grid.front() < 1) throw UsageError("ranks must be positive");
    if (!std::is_sorted(f_grid.begin(), f_grid.end()) ||
        std::adjacent_find(f_grid.begin(), f_grid.end()) != f_grid.end()) {
        throw UsageError("rank grid must be strictly ascending");
    }
    if (restarts < 1) throw UsageError("restarts must be positive");
    if (jobs < 1) throw UsageError("jobs must be positive");
}

SilhouetteConfig RankSelectConfig::silhouette_config(std::uint64_t stream) const {
    SilhouetteConfig sc;
    sc.max_k = K;
    sc.restarts = restarts;
    sc.seed = split_seed(seed, stream);
    sc.sample_limit = sample_limit;
    return sc;
}

Matrix raw_features(const SparseCountTensor& tensor, Mode mode) {
    return Matrix(unfold(tensor, mode));
}

RankSelection select_rank(const SparseCountTensor& tensor, Mode mode,
                          const RankSelectConfig& config, const FitConfig& fit_config) {
    config.validate();
    fit_config.validate();

    RankSelection result;
    result.raw = max_silhouette(raw_features(tensor, mode), config.silhouette_config(0));

    auto evaluate = [&](std::size_t rank) {
        FitConfig fc = fit_config;
        fc.seed = split_seed(fit_config.seed, rank);
        const CpModel model = fit_cp_kl(tensor, rank, fc);
        RankScore score;
        score.rank = rank;
        score.profile = max_silhouette(model.factor(mode), config.silhouette_config(rank));
        return score;
    };

    const std::vector<std::size_t>& grid = config.f_grid;
    result.table.resize(grid.size());
    for (std::size_t start = 0; start < grid.size(); start += config.jobs) {
        const std::size_t stop = std::min(grid.size(), start + config.jobs);
        if (config.jobs == 1) {
            result.table[start] = evaluate(grid[start]);
            continue;
        }
        std::vector<std::future<RankScore>> pending;
        for (std::size_t g = start; g < stop; ++g) {
            pending.push_back(std::async(std::launch::async, evaluate, grid[g]));
        }
        for (std::size_t g = start; g < stop; ++g) result.table[g] = pending[g - start].get();
    }

    const double baseline = result.raw.max_value;
    for (std::size_t g = 0; g < grid.size(); ++g) {
        const double s = result.table[g].profile.max_value;
        const bool beats_raw = baseline <= s;
        const bool plateau =
            g + 1 == grid.size() || std::abs(result.table[g + 1].profile.max_value - s) < config.epsilon;
        const bool floor_ok = !config.min_silhouette || s >= *config.min_silhouette;
        result.table[g].qualifies = beats_raw && plateau && floor_ok && !result.raw.no_structure;
    }

    auto chosen = std::find_if(result.table.begin(), result.table.end(),
                               [](const RankScore& r) { return r.qualifies; });
    if (chosen != result.table.end()) {
        result.chosen_rank = chosen->rank;
    } else {
        result.no_qualifier = true;
        auto best = std::max_element(result.table.begin(), result.table.end(),
                                     [](const RankScore& x, const RankScore& y) {
                                         return x.profile.max_value < y.profile.max_value;
                                     });
        result.chosen_rank = best->rank;
    }
    return result;
}

}  // namespace thoops
