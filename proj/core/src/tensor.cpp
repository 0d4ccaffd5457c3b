#include "thoops/tensor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include "thoops/error.hpp"

namespace thoops {

Mode to_mode(int value) {
    if (value < 1 || value > 3) {
        throw UsageError("mode must be 1, 2 or 3 (got " + std::to_string(value) + ")");
    }
    return static_cast<Mode>(value);
}

std::size_t axis(Mode mode) {
    const int v = static_cast<int>(mode);
    if (v < 1 || v > 3) throw UsageError("invalid tensor mode " + std::to_string(v));
    return static_cast<std::size_t>(v - 1);
}

namespace {

bool parse_integer(const std::string& s, long long& out) {
    if (s.empty()) return false;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc{} && ptr == last;
}

LabelTable index_labels(std::size_t n) {
    LabelTable labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = std::to_string(i);
    return labels;
}

}  // namespace

bool label_less(const std::string& lhs, const std::string& rhs) {
    long long a = 0;
    long long b = 0;
    const bool na = parse_integer(lhs, a);
    const bool nb = parse_integer(rhs, b);
    if (na && nb) return a < b || (a == b && lhs < rhs);
    if (na != nb) return na;  // integers first
    return lhs < rhs;
}

SparseCountTensor::SparseCountTensor(Dims dims, std::vector<Entry> entries,
                                     std::array<LabelTable, 3> labels)
    : dims_(dims), labels_(std::move(labels)) {
    for (std::size_t n = 0; n < 3; ++n) {
        if (dims_[n] == 0) throw UsageError("tensor dimensions must be positive");
        if (labels_[n].empty()) {
            labels_[n] = index_labels(dims_[n]);
        } else if (labels_[n].size() != dims_[n]) {
            throw UsageError("label table " + std::to_string(n + 1) + " has " +
                             std::to_string(labels_[n].size()) + " entries, expected " +
                             std::to_string(dims_[n]));
        }
    }
    for (const Entry& e : entries) {
        if (e.i >= dims_[0] || e.j >= dims_[1] || e.k >= dims_[2]) {
            throw UsageError("tensor entry (" + std::to_string(e.i) + "," + std::to_string(e.j) +
                             "," + std::to_string(e.k) + ") outside dims");
        }
        if (!(e.value >= 0.0) || !std::isfinite(e.value)) {
            throw UsageError("tensor values must be finite and nonnegative");
        }
    }
    auto key = [](const Entry& e) { return std::tie(e.i, e.j, e.k); };
    std::sort(entries.begin(), entries.end(),
              [&](const Entry& a, const Entry& b) { return key(a) < key(b); });
    entries_.reserve(entries.size());
    for (const Entry& e : entries) {
        if (!entries_.empty() && key(entries_.back()) == key(e)) {
            entries_.back().value += e.value;
        } else {
            entries_.push_back(e);
        }
    }
    std::erase_if(entries_, [](const Entry& e) { return e.value == 0.0; });
}

double SparseCountTensor::total() const {
    double s = 0.0;
    for (const Entry& e : entries_) s += e.value;
    return s;
}

double SparseCountTensor::at(std::size_t i, std::size_t j, std::size_t k) const {
    const auto target = std::make_tuple(i, j, k);
    auto it = std::lower_bound(entries_.begin(), entries_.end(), target,
                               [](const Entry& e, const auto& t) {
                                   return std::tie(e.i, e.j, e.k) < t;
                               });
    if (it != entries_.end() && std::tie(it->i, it->j, it->k) == target) return it->value;
    return 0.0;
}

SparseCountTensor SparseCountTensor::scaled(double factor) const {
    if (!(factor > 0.0)) throw UsageError("scale factor must be positive");
    std::vector<Entry> out = entries_;
    for (Entry& e : out) e.value *= factor;
    return SparseCountTensor(dims_, std::move(out), labels_);
}

DenseTensor::DenseTensor(Dims dims, double fill)
    : dims_(dims), values_(dims[0] * dims[1] * dims[2], fill) {}

DenseTensor::DenseTensor(Dims dims, std::vector<double> values)
    : dims_(dims), values_(std::move(values)) {
    if (values_.size() != dims_[0] * dims_[1] * dims_[2]) {
        throw UsageError("dense tensor value count does not match dims");
    }
}

Vector DenseTensor::vec() const {
    const auto [p_dim, q_dim, r_dim] = dims_;
    Vector v(static_cast<Eigen::Index>(values_.size()));
    for (std::size_t r = 0; r < r_dim; ++r)
        for (std::size_t q = 0; q < q_dim; ++q)
            for (std::size_t p = 0; p < p_dim; ++p)
                v(static_cast<Eigen::Index>(p + p_dim * (q + q_dim * r))) = (*this)(p, q, r);
    return v;
}

DenseTensor DenseTensor::from_vec(Dims dims, const Vector& v) {
    DenseTensor t(dims);
    if (static_cast<std::size_t>(v.size()) != t.size()) {
        throw UsageError("vector length does not match dense tensor dims");
    }
    for (std::size_t r = 0; r < dims[2]; ++r)
        for (std::size_t q = 0; q < dims[1]; ++q)
            for (std::size_t p = 0; p < dims[0]; ++p)
                t(p, q, r) = v(static_cast<Eigen::Index>(p + dims[0] * (q + dims[1] * r)));
    return t;
}

double DenseTensor::squared_norm() const {
    double s = 0.0;
    for (double x : values_) s += x * x;
    return s;
}

DenseTensor to_dense(const SparseCountTensor& tensor) {
    DenseTensor out(tensor.dims());
    for (const Entry& e : tensor.entries()) out(e.i, e.j, e.k) = e.value;
    return out;
}

namespace {

struct Placement {
    Eigen::Index row;
    Eigen::Index col;
};

Placement place(const Entry& e, const Dims& d, Mode mode) {
    switch (mode) {
        case Mode::One:
            return {static_cast<Eigen::Index>(e.i), static_cast<Eigen::Index>(e.j + d[1] * e.k)};
        case Mode::Two:
            return {static_cast<Eigen::Index>(e.j), static_cast<Eigen::Index>(e.i + d[0] * e.k)};
        case Mode::Three:
            return {static_cast<Eigen::Index>(e.k), static_cast<Eigen::Index>(e.i + d[0] * e.j)};
    }
    throw UsageError("invalid tensor mode");
}

void check_factors(const SparseCountTensor& tensor, const FactorRefs& f) {
    const Dims& d = tensor.dims();
    if (static_cast<std::size_t>(f.a.rows()) != d[0] ||
        static_cast<std::size_t>(f.b.rows()) != d[1] ||
        static_cast<std::size_t>(f.c.rows()) != d[2]) {
        throw UsageError("factor row counts do not match tensor dims");
    }
    if (f.a.cols() != f.b.cols() || f.a.cols() != f.c.cols() || f.a.cols() == 0) {
        throw UsageError("factor matrices must share a positive rank");
    }
}

}  // namespace

SparseMatrix unfold(const SparseCountTensor& tensor, Mode mode) {
    const Dims& d = tensor.dims();
    const std::size_t n = axis(mode);
    const std::size_t rows = d[n];
    const std::size_t cols = d[0] * d[1] * d[2] / rows;
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(tensor.nnz());
    for (const Entry& e : tensor.entries()) {
        const Placement p = place(e, d, mode);
        triplets.emplace_back(p.row, p.col, e.value);
    }
    SparseMatrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
    m.setFromTriplets(triplets.begin(), triplets.end());
    return m;
}

SparseCountTensor fold(const SparseMatrix& unfolded, Mode mode, const Dims& dims) {
    const std::size_t n = axis(mode);
    if (static_cast<std::size_t>(unfolded.rows()) != dims[n] ||
        static_cast<std::size_t>(unfolded.cols()) * dims[n] != dims[0] * dims[1] * dims[2]) {
        throw UsageError("unfolded matrix shape does not match dims");
    }
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(unfolded.nonZeros()));
    for (Eigen::Index outer = 0; outer < unfolded.outerSize(); ++outer) {
        for (SparseMatrix::InnerIterator it(unfolded, outer); it; ++it) {
            const auto row = static_cast<std::size_t>(it.row());
            const auto col = static_cast<std::size_t>(it.col());
            Entry e;
            e.value = it.value();
            switch (mode) {
                case Mode::One: e.i = row; e.j = col % dims[1]; e.k = col / dims[1]; break;
                case Mode::Two: e.j = row; e.i = col % dims[0]; e.k = col / dims[0]; break;
                case Mode::Three: e.k = row; e.i = col % dims[0]; e.j = col / dims[0]; break;
            }
            entries.push_back(e);
        }
    }
    return SparseCountTensor(dims, std::move(entries));
}

Matrix khatri_rao(const Matrix& m1, const Matrix& m2) {
    if (m1.cols() != m2.cols()) {
        throw UsageError("khatri_rao: column counts differ (" + std::to_string(m1.cols()) +
                         " vs " + std::to_string(m2.cols()) + ")");
    }
    const Eigen::Index rows2 = m2.rows();
    Matrix out(m1.rows() * rows2, m1.cols());
    for (Eigen::Index f = 0; f < m1.cols(); ++f)
        for (Eigen::Index j = 0; j < m1.rows(); ++j)
            out.col(f).segment(j * rows2, rows2) = m1(j, f) * m2.col(f);
    return out;
}

Matrix mttkrp(const SparseCountTensor& tensor, const FactorRefs& factors, Mode mode) {
    check_factors(tensor, factors);
    const Eigen::Index rank = factors.a.cols();
    const std::size_t n = axis(mode);
    Matrix out = Matrix::Zero(static_cast<Eigen::Index>(tensor.dims()[n]), rank);
    for (const Entry& e : tensor.entries()) {
        const auto i = static_cast<Eigen::Index>(e.i);
        const auto j = static_cast<Eigen::Index>(e.j);
        const auto k = static_cast<Eigen::Index>(e.k);
        switch (mode) {
            case Mode::One:
                out.row(i) += e.value * factors.b.row(j).cwiseProduct(factors.c.row(k));
                break;
            case Mode::Two:
                out.row(j) += e.value * factors.a.row(i).cwiseProduct(factors.c.row(k));
                break;
            case Mode::Three:
                out.row(k) += e.value * factors.a.row(i).cwiseProduct(factors.b.row(j));
                break;
        }
    }
    return out;
}

namespace {

Dims replaced(Dims d, std::size_t n, std::size_t size) {
    d[n] = size;
    return d;
}

}  // namespace

DenseTensor ttm_dense(const SparseCountTensor& tensor, const Matrix& m, Mode mode) {
    const std::size_t n = axis(mode);
    const Dims& d = tensor.dims();
    if (static_cast<std::size_t>(m.cols()) != d[n]) {
        throw UsageError("ttm: matrix has " + std::to_string(m.cols()) +
                         " columns, tensor mode has " + std::to_string(d[n]));
    }
    const auto rows = static_cast<std::size_t>(m.rows());
    DenseTensor out(replaced(d, n, rows));
    for (const Entry& e : tensor.entries()) {
        for (std::size_t p = 0; p < rows; ++p) {
            const auto pi = static_cast<Eigen::Index>(p);
            switch (mode) {
                case Mode::One: out(p, e.j, e.k) += m(pi, static_cast<Eigen::Index>(e.i)) * e.value; break;
                case Mode::Two: out(e.i, p, e.k) += m(pi, static_cast<Eigen::Index>(e.j)) * e.value; break;
                case Mode::Three: out(e.i, e.j, p) += m(pi, static_cast<Eigen::Index>(e.k)) * e.value; break;
            }
        }
    }
    return out;
}

DenseTensor ttm_dense(const DenseTensor& tensor, const Matrix& m, Mode mode) {
    const std::size_t n = axis(mode);
    const Dims& d = tensor.dims();
    if (static_cast<std::size_t>(m.cols()) != d[n]) {
        throw UsageError("ttm: matrix has " + std::to_string(m.cols()) +
                         " columns, tensor mode has " + std::to_string(d[n]));
    }
    const auto rows = static_cast<std::size_t>(m.rows());
    DenseTensor out(replaced(d, n, rows));
    for (std::size_t a = 0; a < d[0]; ++a)
        for (std::size_t b = 0; b < d[1]; ++b)
            for (std::size_t c = 0; c < d[2]; ++c) {
                const double x = tensor(a, b, c);
                if (x == 0.0) continue;
                for (std::size_t p = 0; p < rows; ++p) {
                    const auto pi = static_cast<Eigen::Index>(p);
                    switch (mode) {
                        case Mode::One: out(p, b, c) += m(pi, static_cast<Eigen::Index>(a)) * x; break;
                        case Mode::Two: out(a, p, c) += m(pi, static_cast<Eigen::Index>(b)) * x; break;
                        case Mode::Three: out(a, b, p) += m(pi, static_cast<Eigen::Index>(c)) * x; break;
                    }
                }
            }
    return out;
}

DenseTensor ttm_all(const SparseCountTensor& tensor, const Matrix& m1, const Matrix& m2,
                    const Matrix& m3) {
    const Dims& d = tensor.dims();
    if (static_cast<std::size_t>(m1.cols()) != d[0] ||
        static_cast<std::size_t>(m2.cols()) != d[1] ||
        static_cast<std::size_t>(m3.cols()) != d[2]) {
        throw UsageError("ttm_all: matrix column counts do not match tensor dims");
    }
    const Eigen::Index r1 = m1.rows();
    const Eigen::Index r2 = m2.rows();
    const Eigen::Index r3 = m3.rows();
    DenseTensor out({static_cast<std::size_t>(r1), static_cast<std::size_t>(r2),
                     static_cast<std::size_t>(r3)});
    Vector outer12(r1 * r2);
    for (const Entry& e : tensor.entries()) {
        const auto i = static_cast<Eigen::Index>(e.i);
        const auto j = static_cast<Eigen::Index>(e.j);
        const auto k = static_cast<Eigen::Index>(e.k);
        for (Eigen::Index p = 0; p < r1; ++p)
            for (Eigen::Index q = 0; q < r2; ++q)
                outer12(p * r2 + q) = e.value * m1(p, i) * m2(q, j);
        for (Eigen::Index p = 0; p < r1; ++p)
            for (Eigen::Index q = 0; q < r2; ++q) {
                const double w = outer12(p * r2 + q);
                if (w == 0.0) continue;
                for (Eigen::Index r = 0; r < r3; ++r)
                    out(static_cast<std::size_t>(p), static_cast<std::size_t>(q),
                        static_cast<std::size_t>(r)) += w * m3(r, k);
            }
    }
    return out;
}

void write_tensor(std::ostream& out, const SparseCountTensor& tensor) {
    const Dims& d = tensor.dims();
    out << "dims " << d[0] << ' ' << d[1] << ' ' << d[2] << '\n';
    out << std::setprecision(17);
    for (const Entry& e : tensor.entries()) {
        out << e.i << ' ' << e.j << ' ' << e.k << ' ' << e.value << '\n';
    }
    for (std::size_t n = 0; n < 3; ++n) {
        const LabelTable& labels = tensor.labels()[n];
        for (std::size_t idx = 0; idx < labels.size(); ++idx) {
            out << "mode " << (n + 1) << ' ' << idx << ' ' << labels[idx] << '\n';
        }
    }
}

SparseCountTensor read_tensor(std::istream& in) {
    std::string line;
    Dims dims{0, 0, 0};
    bool have_dims = false;
    std::vector<Entry> entries;
    std::array<LabelTable, 3> labels;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw DataError("tensor file line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        if (line.rfind("dims", 0) == 0) {
            std::string tag;
            ls >> tag >> dims[0] >> dims[1] >> dims[2];
            if (!ls || dims[0] == 0 || dims[1] == 0 || dims[2] == 0) fail("bad dims line");
            have_dims = true;
            for (std::size_t n = 0; n < 3; ++n) labels[n].assign(dims[n], std::string{});
        } else if (line.rfind("mode", 0) == 0) {
            if (!have_dims) fail("label before dims");
            std::string tag;
            std::size_t mode = 0;
            std::size_t idx = 0;
            ls >> tag >> mode >> idx;
            if (!ls || mode < 1 || mode > 3 || idx >= dims[mode - 1]) fail("bad label line");
            ls >> std::ws;
            std::string label;
            std::getline(ls, label);
            labels[mode - 1][idx] = label;
        } else {
            if (!have_dims) fail("entry before dims");
            Entry e;
            ls >> e.i >> e.j >> e.k >> e.value;
            if (!ls) fail("bad entry line");
            entries.push_back(e);
        }
    }
    if (!have_dims) throw DataError("tensor file has no dims line");
    for (std::size_t n = 0; n < 3; ++n) {
        for (std::size_t idx = 0; idx < labels[n].size(); ++idx) {
            if (labels[n][idx].empty()) labels[n][idx] = std::to_string(idx);
        }
    }
    try {
        return SparseCountTensor(dims, std::move(entries), std::move(labels));
    } catch (const UsageError& e) {
        throw DataError(std::string("tensor file: ") + e.what());
    }
}

void save_tensor(const std::string& path, const SparseCountTensor& tensor) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    write_tensor(out, tensor);
}

SparseCountTensor load_tensor(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    return read_tensor(in);
}

}  // namespace thoops
