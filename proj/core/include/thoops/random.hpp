#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace thoops {

/// Derive an independent child seed from a parent seed and a stream id.
///
/// Every random consumer in the pipeline gets its seed as
/// `split_seed(run_seed, stream)`; the mixing is SplitMix64 so nearby
/// stream ids give uncorrelated generators.
std::uint64_t split_seed(std::uint64_t seed, std::uint64_t stream);

/// Seeded generator with platform-independent draws.
///
/// The standard distributions are implementation-defined, so uniform
/// draws are taken straight from the engine bits.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in (0, 1].
    double uniform_open_closed() { return 1.0 - uniform(); }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Uniform integer in [0, n).
    std::size_t index(std::size_t n);
    /// Index drawn with probability proportional to `weights` (nonnegative,
    /// not all zero). Inverse-CDF over the running sum.
    std::size_t weighted(std::span<const double> weights);
    /// Standard normal via Box-Muller.
    double normal();
    /// Poisson draw; inversion for small means, normal approximation above 500.
    std::uint64_t poisson(double mean);

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

/// Repeated draws from one fixed discrete distribution: cumulative sums
/// plus binary search.
class CategoricalSampler {
public:
    /// Weights must be nonnegative with a positive sum.
    explicit CategoricalSampler(std::span<const double> weights);

    std::size_t operator()(Rng& rng) const;
    std::size_t size() const { return cumulative_.size(); }

private:
    std::vector<double> cumulative_;
};

}  // namespace thoops
