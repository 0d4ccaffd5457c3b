#pragma once

#include <array>
#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

namespace thoops {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

using Dims = std::array<std::size_t, 3>;

/// Tensor mode, numbered 1..3 as in the usual matricization notation.
enum class Mode : int { One = 1, Two = 2, Three = 3 };

/// Throws UsageError unless 1 <= value <= 3.
Mode to_mode(int value);
/// Zero-based axis for `mode`; throws UsageError for an out-of-range enum.
std::size_t axis(Mode mode);

struct Entry {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t k = 0;
    double value = 0.0;

    friend bool operator==(const Entry&, const Entry&) = default;
};

using LabelTable = std::vector<std::string>;

/// 3-mode nonnegative tensor in coordinate form.
///
/// Construction sums duplicate coordinates, drops zeros and sorts entries
/// by (i, j, k). Instances are immutable afterwards.
class SparseCountTensor {
public:
    SparseCountTensor() = default;

    /// Labels default to the decimal index when a table is left empty.
    SparseCountTensor(Dims dims, std::vector<Entry> entries,
                      std::array<LabelTable, 3> labels = {});

    const Dims& dims() const { return dims_; }
    std::size_t dim(Mode mode) const { return dims_[axis(mode)]; }
    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t nnz() const { return entries_.size(); }
    bool empty() const { return entries_.empty(); }
    const LabelTable& labels(Mode mode) const { return labels_[axis(mode)]; }
    const std::array<LabelTable, 3>& labels() const { return labels_; }

    double total() const;
    /// Value at (i, j, k); zero when unstored. Binary search over entries.
    double at(std::size_t i, std::size_t j, std::size_t k) const;

    /// Copy with every value multiplied by `factor` (> 0).
    SparseCountTensor scaled(double factor) const;

    friend bool operator==(const SparseCountTensor&, const SparseCountTensor&) = default;

private:
    Dims dims_{0, 0, 0};
    std::vector<Entry> entries_;
    std::array<LabelTable, 3> labels_;
};

/// Small dense 3-way array, row-major: value(p, q, r) = values[(p*Q + q)*R + r].
class DenseTensor {
public:
    DenseTensor() = default;
    explicit DenseTensor(Dims dims, double fill = 0.0);
    DenseTensor(Dims dims, std::vector<double> values);

    const Dims& dims() const { return dims_; }
    std::size_t size() const { return values_.size(); }
    double& operator()(std::size_t p, std::size_t q, std::size_t r) {
        return values_[(p * dims_[1] + q) * dims_[2] + r];
    }
    double operator()(std::size_t p, std::size_t q, std::size_t r) const {
        return values_[(p * dims_[1] + q) * dims_[2] + r];
    }
    const std::vector<double>& values() const { return values_; }

    /// Vectorization with mode 1 fastest: element (p,q,r) at p + P*q + P*Q*r.
    Vector vec() const;
    static DenseTensor from_vec(Dims dims, const Vector& v);

    double squared_norm() const;

private:
    Dims dims_{0, 0, 0};
    std::vector<double> values_;
};

DenseTensor to_dense(const SparseCountTensor& tensor);

/// Mode-n matricization. Fibers of `mode` become columns:
///   mode 1: row i, column j + J*k
///   mode 2: row j, column i + I*k
///   mode 3: row k, column i + I*j
/// vec(X) is the column-major vectorization of the mode-1 unfolding.
SparseMatrix unfold(const SparseCountTensor& tensor, Mode mode);

/// Inverse of `unfold`; labels fall back to indices.
SparseCountTensor fold(const SparseMatrix& unfolded, Mode mode, const Dims& dims);

/// Column-wise Kronecker product; row (j, k) of the result is j*K + k where
/// M2 has K rows. With this ordering unfold(X, 1) = A * khatri_rao(C, B)^T.
Matrix khatri_rao(const Matrix& m1, const Matrix& m2);

/// Factor triple of a CP model; columns share the rank.
struct FactorRefs {
    const Matrix& a;
    const Matrix& b;
    const Matrix& c;
};

/// Sparse MTTKRP, O(nnz * F):
///   mode 1: unfold(X,1) * khatri_rao(C, B)
///   mode 2: unfold(X,2) * khatri_rao(C, A)
///   mode 3: unfold(X,3) * khatri_rao(B, A)
Matrix mttkrp(const SparseCountTensor& tensor, const FactorRefs& factors, Mode mode);

/// Mode-n product Y = X x_n M, where M has dim(mode) columns. The output
/// replaces that dimension with M.rows(). Under the vec convention this is
/// (I (x) I (x) M) vec(X) for mode 1, (I (x) M (x) I) for mode 2 and
/// (M (x) I (x) I) for mode 3.
DenseTensor ttm_dense(const SparseCountTensor& tensor, const Matrix& m, Mode mode);
DenseTensor ttm_dense(const DenseTensor& tensor, const Matrix& m, Mode mode);

/// X x_1 M1 x_2 M2 x_3 M3 in a single pass over the nonzeros, without the
/// intermediate dense tensors. Cost O(nnz * R1*R2*R3).
DenseTensor ttm_all(const SparseCountTensor& tensor, const Matrix& m1,
                    const Matrix& m2, const Matrix& m3);

/// Text format:
///   dims I J K
///   i j k value            (one line per nonzero, zero-based)
///   mode <n> <index> <label>
void write_tensor(std::ostream& out, const SparseCountTensor& tensor);
SparseCountTensor read_tensor(std::istream& in);
void save_tensor(const std::string& path, const SparseCountTensor& tensor);
SparseCountTensor load_tensor(const std::string& path);

/// Orders labels numerically when both are integers, else lexicographically.
bool label_less(const std::string& lhs, const std::string& rhs);

}  // namespace thoops
