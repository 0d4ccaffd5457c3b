#include "thoops/corcondia.hpp"

#include <algorithm>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "thoops/error.hpp"

namespace thoops {

namespace {

void check_shapes(const SparseCountTensor& tensor, const CpModel& model) {
    if (model.rank() == 0) throw UsageError("corcondia: model has rank 0");
    if (model.dims() != tensor.dims()) throw UsageError("corcondia: model dims do not match tensor");
}

// Pseudoinverse pieces of one factor: V * diag(1/s) * U', truncated.
struct FactorSvd {
    Matrix u;
    Vector inv_sigma;
    Matrix v;
    std::size_t truncated = 0;
};

FactorSvd factor_svd(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    FactorSvd out;
    out.u = svd.matrixU();
    out.v = svd.matrixV();
    const Vector& s = svd.singularValues();
    out.inv_sigma = Vector::Zero(s.size());
    const double cutoff = s.size() > 0 ? kSingularCutoff * s(0) : 0.0;
    for (Eigen::Index p = 0; p < s.size(); ++p) {
        if (s(p) > cutoff && s(p) > 0.0) {
            out.inv_sigma(p) = 1.0 / s(p);
        } else {
            ++out.truncated;
        }
    }
    return out;
}

}  // namespace

double core_consistency_score(const DenseTensor& core) {
    const Dims& d = core.dims();
    if (d[0] != d[1] || d[1] != d[2] || d[0] == 0) {
        throw UsageError("core consistency needs a cubic core");
    }
    double residual = 0.0;
    for (std::size_t e = 0; e < d[0]; ++e)
        for (std::size_t g = 0; g < d[1]; ++g)
            for (std::size_t h = 0; h < d[2]; ++h) {
                const double target = (e == g && g == h) ? 1.0 : 0.0;
                const double diff = core(e, g, h) - target;
                residual += diff * diff;
            }
    return 100.0 * (1.0 - residual / static_cast<double>(d[0]));
}

CpModel least_squares_scaled(const SparseCountTensor& tensor, const CpModel& model) {
    check_shapes(tensor, model);
    CpModel unit = model;
    for (Matrix* m : {&unit.a, &unit.b, &unit.c}) {
        for (Eigen::Index f = 0; f < m->cols(); ++f) {
            const double norm = m->col(f).cwiseAbs().sum();
            if (norm > 0.0) m->col(f) /= norm;
        }
    }
    const Matrix gram = (unit.a.transpose() * unit.a)
                            .cwiseProduct(unit.b.transpose() * unit.b)
                            .cwiseProduct(unit.c.transpose() * unit.c);
    // <X, a_f o b_f o c_f> is the column sum of the mode-1 MTTKRP weighted by A.
    const Matrix m1 = mttkrp(tensor, {unit.a, unit.b, unit.c}, Mode::One);
    const Vector rhs = (m1.cwiseProduct(unit.a)).colwise().sum().transpose();
    Eigen::CompleteOrthogonalDecomposition<Matrix> cod(gram);
    cod.setThreshold(kSingularCutoff);
    const Vector weights = cod.solve(rhs);
    unit.a = unit.a * weights.asDiagonal();
    unit.lambda = Vector::Ones(weights.size());
    return unit;
}

CorcondiaResult corcondia_reference(const SparseCountTensor& tensor, const CpModel& model) {
    check_shapes(tensor, model);
    const Dims& d = tensor.dims();
    const std::size_t rank = model.rank();
    const double cells = static_cast<double>(d[0]) * static_cast<double>(d[1]) *
                         static_cast<double>(d[2]);
    const double f3 = static_cast<double>(rank * rank * rank);
    if (cells * f3 > kReferenceSizeLimit) {
        throw UsageError("corcondia_reference: IJK*F^3 = " + std::to_string(cells * f3) +
                         " exceeds the dense limit; use corcondia_fast");
    }
    const CpModel scaled = least_squares_scaled(tensor, model);
    const auto rows = static_cast<Eigen::Index>(d[0] * d[1] * d[2]);
    const auto cols = static_cast<Eigen::Index>(rank * rank * rank);
    const auto F = static_cast<Eigen::Index>(rank);
    const auto I = static_cast<Eigen::Index>(d[0]);
    const auto J = static_cast<Eigen::Index>(d[1]);
    const auto K = static_cast<Eigen::Index>(d[2]);

    // (C (x) B (x) A): row i + I(j + Jk), column e + F(g + Fh).
    Matrix kron(rows, cols);
    for (Eigen::Index k = 0; k < K; ++k)
        for (Eigen::Index j = 0; j < J; ++j)
            for (Eigen::Index i = 0; i < I; ++i) {
                const Eigen::Index row = i + I * (j + J * k);
                for (Eigen::Index h = 0; h < F; ++h)
                    for (Eigen::Index g = 0; g < F; ++g) {
                        const double cb = scaled.c(k, h) * scaled.b(j, g);
                        for (Eigen::Index e = 0; e < F; ++e)
                            kron(row, e + F * (g + F * h)) = cb * scaled.a(i, e);
                    }
            }
    const Vector x = to_dense(tensor).vec();

    Eigen::BDCSVD<Matrix> svd(kron, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Vector& s = svd.singularValues();
    const double cutoff = s.size() > 0 ? kSingularCutoff * s(0) : 0.0;
    Vector projected = svd.matrixU().transpose() * x;
    std::size_t truncated = 0;
    for (Eigen::Index p = 0; p < s.size(); ++p) {
        if (s(p) > cutoff && s(p) > 0.0) {
            projected(p) /= s(p);
        } else {
            projected(p) = 0.0;
            ++truncated;
        }
    }
    const Vector g = svd.matrixV() * projected;

    CorcondiaResult result;
    result.core = DenseTensor::from_vec({rank, rank, rank}, g);
    result.score = core_consistency_score(result.core);
    result.rank_used = rank;
    result.truncated = truncated;
    return result;
}

CorcondiaResult corcondia_fast(const SparseCountTensor& tensor, const CpModel& model) {
    check_shapes(tensor, model);
    const Dims& d = tensor.dims();
    const std::size_t rank = model.rank();
    const std::size_t limit = std::min({d[0] * d[1], d[1] * d[2], d[0] * d[2]});
    if (rank > limit) {
        throw UsageError("corcondia: rank " + std::to_string(rank) +
                         " exceeds min(IJ, JK, IK) = " + std::to_string(limit));
    }
    const CpModel scaled = least_squares_scaled(tensor, model);
    const FactorSvd sa = factor_svd(scaled.a);
    const FactorSvd sb = factor_svd(scaled.b);
    const FactorSvd sc = factor_svd(scaled.c);

    DenseTensor projected =
        ttm_all(tensor, sa.u.transpose(), sb.u.transpose(), sc.u.transpose());
    const Dims& pd = projected.dims();
    for (std::size_t p = 0; p < pd[0]; ++p)
        for (std::size_t q = 0; q < pd[1]; ++q)
            for (std::size_t r = 0; r < pd[2]; ++r)
                projected(p, q, r) *= sa.inv_sigma(static_cast<Eigen::Index>(p)) *
                                      sb.inv_sigma(static_cast<Eigen::Index>(q)) *
                                      sc.inv_sigma(static_cast<Eigen::Index>(r));
    DenseTensor core = ttm_dense(projected, sa.v, Mode::One);
    core = ttm_dense(core, sb.v, Mode::Two);
    core = ttm_dense(core, sc.v, Mode::Three);

    CorcondiaResult result;
    result.score = core_consistency_score(core);
    result.core = std::move(core);
    result.rank_used = rank;
    result.truncated = sa.truncated + sb.truncated + sc.truncated;
    return result;
}

}  // namespace thoops
