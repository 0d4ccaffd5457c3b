#include "thoops/cp_kl.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "thoops/error.hpp"
#include "thoops/random.hpp"

namespace thoops {

namespace {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Indices of an entry as (target, other1, other2) for an update of `mode`.
struct Triple {
    std::size_t target;
    std::size_t first;
    std::size_t second;
};

Triple split(const Entry& e, Mode mode) {
    switch (mode) {
        case Mode::One: return {e.i, e.j, e.k};
        case Mode::Two: return {e.j, e.i, e.k};
        case Mode::Three: return {e.k, e.i, e.j};
    }
    throw UsageError("invalid tensor mode");
}

struct OtherModes {
    Mode first;
    Mode second;
};

OtherModes others(Mode mode) {
    switch (mode) {
        case Mode::One: return {Mode::Two, Mode::Three};
        case Mode::Two: return {Mode::One, Mode::Three};
        case Mode::Three: return {Mode::One, Mode::Two};
    }
    throw UsageError("invalid tensor mode");
}

// `inner_iters` multiplicative KL updates of phi (target factor with the
// weights absorbed) while p1 and p2 stay fixed.
void multiplicative_updates(const SparseCountTensor& tensor, Mode mode, RowMatrix& phi,
                            const RowMatrix& p1, const RowMatrix& p2, int inner_iters,
                            double epsilon) {
    const Eigen::Index rank = phi.cols();
    const Eigen::RowVectorXd denominator =
        (p1.colwise().sum().array() * p2.colwise().sum().array()).max(epsilon).matrix();
    RowMatrix numerator(phi.rows(), rank);
    std::vector<double> w(static_cast<std::size_t>(rank));
    for (int it = 0; it < inner_iters; ++it) {
        numerator.setZero();
        for (const Entry& e : tensor.entries()) {
            const Triple t = split(e, mode);
            const double* row1 = p1.data() + t.first * rank;
            const double* row2 = p2.data() + t.second * rank;
            const double* prow = phi.data() + t.target * rank;
            double m = 0.0;
            for (Eigen::Index f = 0; f < rank; ++f) {
                w[f] = row1[f] * row2[f];
                m += prow[f] * w[f];
            }
            const double ratio = e.value / std::max(m, epsilon);
            double* nrow = numerator.data() + t.target * rank;
            for (Eigen::Index f = 0; f < rank; ++f) nrow[f] += ratio * w[f];
        }
        phi.array() *= numerator.array().rowwise() / denominator.array();
    }
}

// Column 1-norms of a nonnegative matrix.
Vector column_sums(const Matrix& m) { return m.colwise().sum().transpose(); }

void check_same_shape(const SparseCountTensor& tensor, const CpModel& model) {
    if (model.dims() != tensor.dims()) {
        throw UsageError("model dims do not match tensor dims");
    }
}

}  // namespace

Dims CpModel::dims() const {
    return {static_cast<std::size_t>(a.rows()), static_cast<std::size_t>(b.rows()),
            static_cast<std::size_t>(c.rows())};
}

const Matrix& CpModel::factor(Mode mode) const {
    switch (mode) {
        case Mode::One: return a;
        case Mode::Two: return b;
        case Mode::Three: return c;
    }
    throw UsageError("invalid tensor mode");
}

Matrix& CpModel::factor(Mode mode) {
    return const_cast<Matrix&>(std::as_const(*this).factor(mode));
}

double CpModel::value(std::size_t i, std::size_t j, std::size_t k) const {
    const auto ii = static_cast<Eigen::Index>(i);
    const auto jj = static_cast<Eigen::Index>(j);
    const auto kk = static_cast<Eigen::Index>(k);
    double m = 0.0;
    for (Eigen::Index f = 0; f < lambda.size(); ++f) m += lambda(f) * a(ii, f) * b(jj, f) * c(kk, f);
    return m;
}

double CpModel::total() const {
    return (lambda.array() * column_sums(a).array() * column_sums(b).array() *
            column_sums(c).array())
        .sum();
}

DenseTensor CpModel::reconstruct() const {
    const Dims d = dims();
    DenseTensor out(d);
    for (std::size_t i = 0; i < d[0]; ++i)
        for (std::size_t j = 0; j < d[1]; ++j)
            for (std::size_t k = 0; k < d[2]; ++k) out(i, j, k) = value(i, j, k);
    return out;
}

CpModel CpModel::from_factors(Matrix a, Matrix b, Matrix c) {
    if (a.cols() != b.cols() || a.cols() != c.cols() || a.cols() == 0) {
        throw UsageError("factor matrices must share a positive rank");
    }
    CpModel m;
    m.lambda = Vector::Ones(a.cols());
    m.a = std::move(a);
    m.b = std::move(b);
    m.c = std::move(c);
    return m;
}

CpModel CpModel::permuted(const std::vector<std::size_t>& perm) const {
    if (perm.size() != rank()) throw UsageError("permutation length does not match rank");
    CpModel out = *this;
    for (std::size_t f = 0; f < perm.size(); ++f) {
        const auto to = static_cast<Eigen::Index>(f);
        const auto from = static_cast<Eigen::Index>(perm[f]);
        out.a.col(to) = a.col(from);
        out.b.col(to) = b.col(from);
        out.c.col(to) = c.col(from);
        out.lambda(to) = lambda(from);
    }
    return out;
}

void FitConfig::validate() const {
    if (max_outer_iters <= 0) throw UsageError("max_outer_iters must be positive");
    if (inner_iters <= 0) throw UsageError("inner_iters must be positive");
    if (!(rel_tol > 0.0) || !(rel_tol < 1.0)) throw UsageError("rel_tol must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
}

double kl_objective(const SparseCountTensor& tensor, const CpModel& model, double epsilon) {
    check_same_shape(tensor, model);
    double sum = 0.0;
    for (const Entry& e : tensor.entries()) {
        const double m = std::max(model.value(e.i, e.j, e.k), epsilon);
        sum += e.value * std::log(e.value / m) - e.value;
    }
    sum += model.total();
    return std::max(sum, 0.0);
}

namespace {

// Update one mode in place: absorb lambda, run the multiplicative steps,
// split the column sums back out.
void update_mode(const SparseCountTensor& tensor, CpModel& model, Mode mode,
                 const FitConfig& config) {
    const OtherModes o = others(mode);
    const RowMatrix p1 = model.factor(o.first);
    const RowMatrix p2 = model.factor(o.second);
    RowMatrix phi = model.factor(mode) * model.lambda.asDiagonal();
    multiplicative_updates(tensor, mode, phi, p1, p2, config.inner_iters, config.epsilon);
    Matrix updated = phi;
    const Vector sums = column_sums(updated);
    for (Eigen::Index f = 0; f < updated.cols(); ++f) {
        if (sums(f) > 0.0) updated.col(f) /= sums(f);
    }
    model.factor(mode) = std::move(updated);
    model.lambda = sums;
}

Matrix random_factor(Rng& rng, std::size_t rows, std::size_t rank) {
    Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(rank));
    // Fill column by column so the draw order does not depend on storage order.
    for (Eigen::Index f = 0; f < m.cols(); ++f)
        for (Eigen::Index r = 0; r < m.rows(); ++r) m(r, f) = rng.uniform_open_closed();
    for (Eigen::Index f = 0; f < m.cols(); ++f) m.col(f) /= m.col(f).sum();
    return m;
}

}  // namespace

CpModel fit_cp_kl(const SparseCountTensor& tensor, std::size_t rank, const FitConfig& config) {
    config.validate();
    if (rank < 1) throw UsageError("rank must be at least 1");
    if (tensor.empty()) throw UsageError("cannot fit an empty tensor");

    const Dims& d = tensor.dims();
    Rng rng(config.seed);
    CpModel model;
    model.a = random_factor(rng, d[0], rank);
    model.b = random_factor(rng, d[1], rank);
    model.c = random_factor(rng, d[2], rank);
    model.lambda = Vector::Constant(static_cast<Eigen::Index>(rank),
                                    tensor.total() / static_cast<double>(rank));
    model.labels = tensor.labels();

    const double absolute_slack = 1e-12 * std::max(1.0, tensor.total());
    double previous = kl_objective(tensor, model, config.epsilon);
    model.fit_history.push_back(previous);
    for (int outer = 0; outer < config.max_outer_iters; ++outer) {
        update_mode(tensor, model, Mode::One, config);
        update_mode(tensor, model, Mode::Two, config);
        update_mode(tensor, model, Mode::Three, config);
        const double current = kl_objective(tensor, model, config.epsilon);
        model.fit_history.push_back(current);
        if (current > previous + kMonotoneSlack * previous + absolute_slack) {
            std::ostringstream msg;
            msg << std::setprecision(17) << "KL objective increased from " << previous << " to "
                << current << " at outer iteration " << outer + 1;
            throw InternalError(msg.str());
        }
        if (current == 0.0 || previous - current <= config.rel_tol * previous) break;
        previous = current;
    }
    return normalize_model(std::move(model));
}

CpModel fold_in(const SparseCountTensor& tensor, const CpModel& model, Mode mode,
                const FitConfig& config) {
    config.validate();
    const std::size_t n = axis(mode);
    const Dims td = tensor.dims();
    const Dims md = model.dims();
    for (std::size_t m = 0; m < 3; ++m) {
        if (m != n && td[m] != md[m]) throw UsageError("fold_in: fixed modes do not match model");
    }
    const OtherModes o = others(mode);
    const RowMatrix p1 = model.factor(o.first);
    const RowMatrix p2 = model.factor(o.second);
    const std::size_t rank = model.rank();

    // Start from the mass-preserving uniform guess for every new entity.
    RowMatrix phi(static_cast<Eigen::Index>(td[n]), static_cast<Eigen::Index>(rank));
    phi.setConstant(model.lambda.sum() / static_cast<double>(rank * td[n]));
    const int sweeps = std::max(1, config.max_outer_iters / 10);
    for (int s = 0; s < sweeps; ++s) {
        multiplicative_updates(tensor, mode, phi, p1, p2, config.inner_iters, config.epsilon);
    }

    CpModel out = model;
    Matrix coefficients = phi;
    for (Eigen::Index f = 0; f < coefficients.cols(); ++f) {
        const double l = model.lambda(f);
        coefficients.col(f) = l > 0.0 ? Vector(coefficients.col(f) / l)
                                      : Vector::Zero(coefficients.rows());
    }
    out.factor(mode) = std::move(coefficients);
    out.labels[n] = tensor.labels()[n];
    out.fit_history.clear();
    return out;
}

CpModel normalize_model(CpModel model) {
    const std::size_t rank = model.rank();
    for (std::size_t f = 0; f < rank; ++f) {
        const auto ff = static_cast<Eigen::Index>(f);
        double scale = 1.0;
        bool degenerate = false;
        for (Matrix* m : {&model.a, &model.b, &model.c}) {
            const double norm = m->col(ff).cwiseAbs().sum();
            if (norm == 0.0) {
                degenerate = true;
                continue;
            }
            m->col(ff) /= norm;
            scale *= norm;
        }
        model.lambda(ff) = degenerate ? 0.0 : model.lambda(ff) * scale;
    }

    std::vector<std::size_t> order(rank);
    std::iota(order.begin(), order.end(), 0);
    const Matrix& a = model.a;
    const Vector& lambda = model.lambda;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
        const auto fx = static_cast<Eigen::Index>(x);
        const auto fy = static_cast<Eigen::Index>(y);
        if (lambda(fx) != lambda(fy)) return lambda(fx) > lambda(fy);
        return std::lexicographical_compare(a.col(fx).begin(), a.col(fx).end(),
                                            a.col(fy).begin(), a.col(fy).end());
    });
    return model.permuted(order);
}

double congruence(const CpModel& lhs, std::size_t f, const CpModel& rhs, std::size_t g) {
    const auto ff = static_cast<Eigen::Index>(f);
    const auto gg = static_cast<Eigen::Index>(g);
    double product = 1.0;
    for (Mode mode : {Mode::One, Mode::Two, Mode::Three}) {
        const auto x = lhs.factor(mode).col(ff);
        const auto y = rhs.factor(mode).col(gg);
        if (x.size() != y.size()) throw UsageError("congruence: factor row counts differ");
        const double denom = x.norm() * y.norm();
        if (denom == 0.0) return 0.0;
        product *= x.dot(y) / denom;
    }
    return product;
}

std::vector<double> matched_congruence(const CpModel& reference, const CpModel& estimate) {
    const std::size_t nr = reference.rank();
    const std::size_t ne = estimate.rank();
    Matrix scores(static_cast<Eigen::Index>(nr), static_cast<Eigen::Index>(ne));
    for (std::size_t f = 0; f < nr; ++f)
        for (std::size_t g = 0; g < ne; ++g)
            scores(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(g)) =
                congruence(reference, f, estimate, g);
    std::vector<double> best(nr, 0.0);
    std::vector<bool> used_r(nr, false);
    std::vector<bool> used_e(ne, false);
    for (std::size_t round = 0; round < std::min(nr, ne); ++round) {
        double top = -2.0;
        std::size_t bf = 0;
        std::size_t bg = 0;
        for (std::size_t f = 0; f < nr; ++f) {
            if (used_r[f]) continue;
            for (std::size_t g = 0; g < ne; ++g) {
                if (used_e[g]) continue;
                const double s = scores(static_cast<Eigen::Index>(f), static_cast<Eigen::Index>(g));
                if (s > top) {
                    top = s;
                    bf = f;
                    bg = g;
                }
            }
        }
        used_r[bf] = true;
        used_e[bg] = true;
        best[bf] = top;
    }
    return best;
}

std::vector<DegeneracyFlag> detect_degenerate(const CpModel& model,
                                              const DegeneracyThresholds& thresholds) {
    std::vector<DegeneracyFlag> flags;
    const std::size_t rank = model.rank();
    const double lambda_max = rank > 0 ? model.lambda.maxCoeff() : 0.0;
    for (std::size_t f = 0; f < rank; ++f) {
        const double l = model.lambda(static_cast<Eigen::Index>(f));
        if (!(l >= thresholds.collapse_ratio * lambda_max) || lambda_max == 0.0) {
            flags.push_back({DegeneracyKind::Collapsed, f, f,
                             lambda_max > 0.0 ? l / lambda_max : 0.0});
        }
    }
    for (std::size_t f = 0; f < rank; ++f) {
        for (std::size_t g = f + 1; g < rank; ++g) {
            const double cg = congruence(model, f, model, g);
            if (cg >= thresholds.near_duplicate) {
                flags.push_back({DegeneracyKind::NearDuplicate, f, g, cg});
                continue;
            }
            std::array<double, 3> cosines{};
            for (Mode m : {Mode::One, Mode::Two, Mode::Three}) {
                const Matrix& x = model.factor(m);
                const double den = x.col(static_cast<Eigen::Index>(f)).norm() *
                                   x.col(static_cast<Eigen::Index>(g)).norm();
                cosines[axis(m)] = den > 0.0 ? x.col(static_cast<Eigen::Index>(f))
                                                       .dot(x.col(static_cast<Eigen::Index>(g))) / den
                                             : 0.0;
            }
            std::sort(cosines.begin(), cosines.end());
            if (cosines[1] >= thresholds.near_duplicate) {
                flags.push_back({DegeneracyKind::Split, f, g, cosines[1]});
            }
        }
    }
    return flags;
}

CpModel align_rows(const CpModel& model, const std::array<LabelTable, 3>& labels) {
    CpModel out = model;
    for (Mode mode : {Mode::One, Mode::Two, Mode::Three}) {
        const std::size_t n = axis(mode);
        std::unordered_map<std::string, Eigen::Index> position;
        for (std::size_t r = 0; r < model.labels[n].size(); ++r) {
            position.emplace(model.labels[n][r], static_cast<Eigen::Index>(r));
        }
        const Matrix& src = model.factor(mode);
        Matrix dst = Matrix::Zero(static_cast<Eigen::Index>(labels[n].size()), src.cols());
        for (std::size_t r = 0; r < labels[n].size(); ++r) {
            auto it = position.find(labels[n][r]);
            if (it != position.end()) dst.row(static_cast<Eigen::Index>(r)) = src.row(it->second);
        }
        out.factor(mode) = std::move(dst);
        out.labels[n] = labels[n];
    }
    return out;
}

void write_model(std::ostream& out, const CpModel& model) {
    const Dims d = model.dims();
    out << "rank " << model.rank() << '\n';
    out << "dims " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
    out << std::setprecision(17);
    for (std::size_t f = 0; f < model.rank(); ++f) {
        out << "lambda " << f << ' ' << model.lambda(static_cast<Eigen::Index>(f)) << '\n';
    }
    for (Mode mode : {Mode::One, Mode::Two, Mode::Three}) {
        const Matrix& m = model.factor(mode);
        for (Eigen::Index r = 0; r < m.rows(); ++r)
            for (Eigen::Index f = 0; f < m.cols(); ++f)
                if (m(r, f) != 0.0)
                    out << "factor " << static_cast<int>(mode) << ' ' << r << ' ' << f << ' '
                        << m(r, f) << '\n';
    }
    for (std::size_t it = 0; it < model.fit_history.size(); ++it) {
        out << "history " << it << ' ' << model.fit_history[it] << '\n';
    }
    for (std::size_t n = 0; n < 3; ++n) {
        for (std::size_t idx = 0; idx < model.labels[n].size(); ++idx) {
            out << "label " << (n + 1) << ' ' << idx << ' ' << model.labels[n][idx] << '\n';
        }
    }
}

CpModel read_model(std::istream& in) {
    std::string line;
    std::size_t line_no = 0;
    std::size_t rank = 0;
    Dims dims{0, 0, 0};
    bool have_rank = false;
    bool have_dims = false;
    CpModel model;
    std::map<std::size_t, double> history;
    auto fail = [&](const std::string& why) {
        throw DataError("model file line " + std::to_string(line_no) + ": " + why);
    };
    auto ready = [&] {
        if (!have_rank || !have_dims) fail("rank and dims must precede model data");
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "rank") {
            ls >> rank;
            if (!ls || rank == 0) fail("bad rank");
            have_rank = true;
        } else if (tag == "dims") {
            ls >> dims[0] >> dims[1] >> dims[2];
            if (!ls || dims[0] == 0 || dims[1] == 0 || dims[2] == 0) fail("bad dims");
            have_dims = true;
        } else {
            ready();
            if (model.lambda.size() == 0) {
                const auto r = static_cast<Eigen::Index>(rank);
                model.a = Matrix::Zero(static_cast<Eigen::Index>(dims[0]), r);
                model.b = Matrix::Zero(static_cast<Eigen::Index>(dims[1]), r);
                model.c = Matrix::Zero(static_cast<Eigen::Index>(dims[2]), r);
                model.lambda = Vector::Zero(r);
                for (std::size_t n = 0; n < 3; ++n) model.labels[n].assign(dims[n], std::string{});
            }
            if (tag == "lambda") {
                std::size_t f = 0;
                double v = 0.0;
                ls >> f >> v;
                if (!ls || f >= rank) fail("bad lambda line");
                model.lambda(static_cast<Eigen::Index>(f)) = v;
            } else if (tag == "factor") {
                int mode = 0;
                std::size_t row = 0;
                std::size_t f = 0;
                double v = 0.0;
                ls >> mode >> row >> f >> v;
                if (!ls || mode < 1 || mode > 3 || f >= rank ||
                    row >= dims[static_cast<std::size_t>(mode - 1)]) {
                    fail("bad factor line");
                }
                model.factor(static_cast<Mode>(mode))(static_cast<Eigen::Index>(row),
                                                      static_cast<Eigen::Index>(f)) = v;
            } else if (tag == "history") {
                std::size_t it = 0;
                double v = 0.0;
                ls >> it >> v;
                if (!ls) fail("bad history line");
                history[it] = v;
            } else if (tag == "label") {
                std::size_t mode = 0;
                std::size_t idx = 0;
                ls >> mode >> idx;
                if (!ls || mode < 1 || mode > 3 || idx >= dims[mode - 1]) fail("bad label line");
                ls >> std::ws;
                std::getline(ls, model.labels[mode - 1][idx]);
            } else {
                fail("unknown record '" + tag + "'");
            }
        }
    }
    ready();
    if (model.lambda.size() == 0) fail("model has no data");
    for (std::size_t n = 0; n < 3; ++n)
        for (std::size_t idx = 0; idx < model.labels[n].size(); ++idx)
            if (model.labels[n][idx].empty()) model.labels[n][idx] = std::to_string(idx);
    for (const auto& [it, v] : history) model.fit_history.push_back(v);
    return model;
}

void save_model(const std::string& path, const CpModel& model) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    write_model(out, model);
}

CpModel load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_model(in);
}

}  // namespace thoops
