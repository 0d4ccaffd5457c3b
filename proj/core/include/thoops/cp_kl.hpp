#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "thoops/tensor.hpp"

namespace thoops {

/// Nonnegative CP model  X ~ sum_f lambda_f a_f o b_f o c_f.
///
/// After normalization every factor column has unit 1-norm, the scale of
/// component f lives in lambda(f) and components are ordered by lambda,
/// largest first.
struct CpModel {
    Matrix a;
    Matrix b;
    Matrix c;
    Vector lambda;
    /// Objective before the first sweep followed by one value per outer iteration.
    std::vector<double> fit_history;
    /// Entity labels copied from the fitted tensor.
    std::array<LabelTable, 3> labels;

    std::size_t rank() const { return static_cast<std::size_t>(lambda.size()); }
    Dims dims() const;
    const Matrix& factor(Mode mode) const;
    Matrix& factor(Mode mode);

    /// Model value at one cell.
    double value(std::size_t i, std::size_t j, std::size_t k) const;
    /// Sum of the model over all cells, sum_f lambda_f |a_f|_1 |b_f|_1 |c_f|_1.
    double total() const;
    /// Dense reconstruction; intended for small tensors.
    DenseTensor reconstruct() const;

    /// Build a model from raw factors with unit weights (not normalized).
    static CpModel from_factors(Matrix a, Matrix b, Matrix c);
    /// Same model with component order `perm` (new f takes old perm[f]).
    CpModel permuted(const std::vector<std::size_t>& perm) const;
};

struct FitConfig {
    int max_outer_iters = 500;
    double rel_tol = 1e-6;
    int inner_iters = 10;
    double epsilon = 1e-12;
    std::uint64_t seed = 0;

    /// Throws UsageError when a field is out of range.
    void validate() const;
};

/// Relative slack allowed between consecutive objective values before the
/// fitter reports a kernel bug.
inline constexpr double kMonotoneSlack = 1e-9;

/// Fit a rank-`rank` nonnegative CP model minimizing the generalized KL
/// divergence  D(X||M) = sum x log(x/m) - x + m.
///
/// Multiplicative updates, one mode at a time: with the other two factors
/// held at unit column sums, `inner_iters` majorization steps are applied
/// to the current factor with the weights absorbed, then the column sums
/// are split back into lambda. Every step is a majorize-minimize step, so
/// the objective cannot increase; an increase beyond kMonotoneSlack throws
/// InternalError.
///
/// Initialization draws uniform(0,1] factors from `config.seed` and sets
/// every lambda to total(X)/rank. The returned model is normalized.
CpModel fit_cp_kl(const SparseCountTensor& tensor, std::size_t rank, const FitConfig& config);

/// Re-estimate the factor of `mode` for a tensor whose other two modes
/// match `model`, keeping those factors and lambda fixed. Used to project
/// new entities (for example held-out possessions) onto known components.
CpModel fold_in(const SparseCountTensor& tensor, const CpModel& model, Mode mode,
                const FitConfig& config);

/// Generalized KL divergence between `tensor` and the model. Nonzeros are
/// summed exactly; zero cells contribute only through the closed-form
/// model total. Model values under nonzero data are floored at `epsilon`.
double kl_objective(const SparseCountTensor& tensor, const CpModel& model,
                    double epsilon = 1e-12);

/// Unit 1-norm columns, scale moved into lambda, components sorted by
/// lambda descending (ties: mode-1 column, lexicographically ascending).
/// A component with an all-zero column gets lambda 0.
CpModel normalize_model(CpModel model);

enum class DegeneracyKind { NearDuplicate, Split, Collapsed };

struct DegeneracyFlag {
    DegeneracyKind kind;
    std::size_t first;
    std::size_t second;  // equals `first` for Collapsed
    double value;        // congruence, shared-mode cosine, or lambda_f / lambda_max
};

struct DegeneracyThresholds {
    double near_duplicate = 0.98;
    double collapse_ratio = 1e-8;
};

/// Flags component pairs with triple congruence >= near_duplicate and
/// components with lambda_f < collapse_ratio * lambda_max.
///
/// The classic two-component degeneracy (congruence near -1) cannot occur
/// with nonnegative factors, so near-duplicates stand in for it. Past the
/// true rank the fitter tends to split one component in two that agree in
/// two modes and differ in the third; a pair whose column cosines reach
/// near_duplicate in two of the three modes is flagged as Split.
std::vector<DegeneracyFlag> detect_degenerate(const CpModel& model,
                                              const DegeneracyThresholds& thresholds = {});

/// Product over the three modes of the cosine between column f of `lhs`
/// and column g of `rhs`. Zero columns give 0.
double congruence(const CpModel& lhs, std::size_t f, const CpModel& rhs, std::size_t g);

/// Greedy one-to-one matching of `estimate` components to `reference`
/// components by congruence. Entry f is the congruence of reference
/// component f with its match (0 when estimate has fewer components).
std::vector<double> matched_congruence(const CpModel& reference, const CpModel& estimate);

/// Reorder factor rows to follow `labels`; rows for labels absent from
/// the model are zero.
CpModel align_rows(const CpModel& model, const std::array<LabelTable, 3>& labels);

/// Text format:
///   rank F
///   dims I J K
///   lambda <f> <value>
///   factor <mode> <row> <f> <value>     (nonzero entries only)
///   history <iter> <value>
///   label <mode> <index> <label>
void write_model(std::ostream& out, const CpModel& model);
CpModel read_model(std::istream& in);
void save_model(const std::string& path, const CpModel& model);
CpModel load_model(const std::string& path);

}  // namespace thoops
