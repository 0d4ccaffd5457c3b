#pragma once

#include <cstddef>

#include "thoops/cp_kl.hpp"
#include "thoops/tensor.hpp"

namespace thoops {

/// Core consistency of a CP model against its data.
///
/// The core G is the least-squares Tucker core of X for the model's factor
/// matrices: vec(G) = (C (x) B (x) A)^+ vec(X), with the mode-1-fastest vec
/// convention of tensor.hpp. Before solving, every column is brought to
/// unit 1-norm and the least-squares component weights w are absorbed
/// into A, where w solves  (A'A * B'B * C'C) w = [<X, a_f o b_f o c_f>]_f.
/// The ideal core is then the superdiagonal of ones and
///
///     score = 100 * (1 - |G - T|_F^2 / F).
///
/// Absorbing w rather than the model's own lambda makes the score
/// independent of how the weights were fitted: a KL fit and a
/// least-squares fit with the same loadings score the same, and a rank-1
/// model always scores exactly 100.
struct CorcondiaResult {
    double score = 0.0;
    DenseTensor core;
    std::size_t rank_used = 0;
    /// Singular values dropped by the pseudoinverse (fast path: per factor).
    std::size_t truncated = 0;
};

/// Relative singular-value cutoff used by both pseudoinverse routes.
inline constexpr double kSingularCutoff = 1e-10;

/// Largest I*J*K*F^3 the reference solver will materialize.
inline constexpr double kReferenceSizeLimit = 1e7;

/// Dense reference: builds the IJK x F^3 Kronecker matrix and applies its
/// pseudoinverse. Throws UsageError beyond kReferenceSizeLimit.
CorcondiaResult corcondia_reference(const SparseCountTensor& tensor, const CpModel& model);

/// Sparse route: with A = Ua Sa Va' (likewise B, C),
///     G = X x1 Ua' x2 Ub' x3 Uc'  scaled by 1/(sa_p sb_q sc_r)  x1 Va x2 Vb x3 Vc.
/// The first product is evaluated in one pass over the nonzeros, so no
/// matrix larger than max(I,J,K) x F is formed.
///
/// Throws UsageError when F exceeds min(IJ, JK, IK); singular values below
/// kSingularCutoff * sigma_max of a factor are truncated and counted.
CorcondiaResult corcondia_fast(const SparseCountTensor& tensor, const CpModel& model);

/// 100 * (1 - |G - T|^2 / F) for an F x F x F core.
double core_consistency_score(const DenseTensor& core);

/// Unit-column loadings with the least-squares weights folded into mode 1.
/// Shared by both routes; exposed for tests.
CpModel least_squares_scaled(const SparseCountTensor& tensor, const CpModel& model);

}  // namespace thoops
