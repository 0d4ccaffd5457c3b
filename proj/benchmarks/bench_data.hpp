#pragma once

#include "thoops/cp_kl.hpp"
#include "thoops/random.hpp"
#include "thoops/tensor.hpp"

namespace bench {

inline thoops::SparseCountTensor random_tensor(const thoops::Dims& d, std::size_t nnz, std::uint64_t seed) {
    thoops::Rng rng(seed);
    std::vector<thoops::Entry> e;
    e.reserve(nnz);
    for (std::size_t n = 0; n < nnz; ++n) {
        e.push_back({rng.index(d[0]), rng.index(d[1]), rng.index(d[2]), static_cast<double>(1 + rng.index(4))});
    }
    return thoops::SparseCountTensor(d, std::move(e));
}

inline thoops::Matrix random_factor(std::size_t rows, std::size_t rank, thoops::Rng& rng) {
    thoops::Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rank));
    for (Eigen::Index c = 0; c < m.cols(); ++c)
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, c) = rng.uniform_open_closed();
    return m;
}

inline thoops::CpModel random_model(const thoops::Dims& d, std::size_t rank, std::uint64_t seed) {
    thoops::Rng rng(seed);
    return thoops::normalize_model(thoops::CpModel::from_factors(
        random_factor(d[0], rank, rng), random_factor(d[1], rank, rng), random_factor(d[2], rank, rng)));
}

}  // namespace bench
