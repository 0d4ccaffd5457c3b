#include "thoops/random.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "thoops/error.hpp"

namespace thoops {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

}  // namespace

std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::size_t Rng::index(std::size_t n) {
    if (n == 0) throw UsageError("Rng::index: empty range");
    auto i = static_cast<std::size_t>(uniform() * static_cast<double>(n));
    return i < n ? i : n - 1;
}

std::size_t Rng::weighted(std::span<const double> weights) {
    double total = 0.0;
    for (double w : weights) total += w;
    if (!(total > 0.0)) throw UsageError("Rng::weighted: weights sum to zero");
    const double target = uniform() * total;
    double running = 0.0;
    std::size_t last_positive = 0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i] <= 0.0) continue;
        running += weights[i];
        last_positive = i;
        if (target < running) return i;
    }
    return last_positive;
}

double Rng::normal() {
    const double u1 = uniform_open_closed();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::uint64_t Rng::poisson(double mean) {
    if (mean <= 0.0) return 0;
    if (mean > 500.0) {
        const double draw = std::round(mean + std::sqrt(mean) * normal());
        return draw < 0.0 ? 0 : static_cast<std::uint64_t>(draw);
    }
    // Inversion by sequential search; fine for the moderate means used here.
    const double u = uniform();
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u > cdf && k < 10000) {
        ++k;
        p *= mean / static_cast<double>(k);
        cdf += p;
    }
    return k;
}

CategoricalSampler::CategoricalSampler(std::span<const double> weights) {
    cumulative_.reserve(weights.size());
    double running = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0)) throw UsageError("CategoricalSampler: negative weight");
        running += w;
        cumulative_.push_back(running);
    }
    if (!(running > 0.0)) throw UsageError("CategoricalSampler: weights sum to zero");
}

std::size_t CategoricalSampler::operator()(Rng& rng) const {
    const double target = rng.uniform() * cumulative_.back();
    auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
    if (it == cumulative_.end()) --it;
    // The end fallback may land on trailing zero-weight slots.
    while (it != cumulative_.begin() && *(it - 1) == *it) --it;
    return static_cast<std::size_t>(it - cumulative_.begin());
}

}  // namespace thoops
