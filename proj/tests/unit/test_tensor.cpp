#include <doctest.h>

#include <sstream>

#include "oracles.hpp"
#include "thoops/error.hpp"
#include "thoops/tensor.hpp"

using namespace thoops;
using namespace thoops::testing;

TEST_SUITE("tensor") {

TEST_CASE("construction sums duplicates, drops zeros and sorts") {
    SparseCountTensor t({2, 2, 2}, {{1, 1, 1, 2.0}, {0, 0, 0, 1.0}, {1, 1, 1, 3.0}, {0, 1, 0, 0.0}});
    REQUIRE(t.nnz() == 2);
    CHECK(t.entries()[0] == Entry{0, 0, 0, 1.0});
    CHECK(t.entries()[1] == Entry{1, 1, 1, 5.0});
    CHECK(t.total() == doctest::Approx(6.0));
    CHECK(t.at(1, 1, 1) == 5.0);
    CHECK(t.at(0, 1, 0) == 0.0);
    CHECK(t.labels(Mode::Two) == LabelTable{"0", "1"});
}

TEST_CASE("construction rejects bad input") {
    CHECK_THROWS_AS(SparseCountTensor({2, 2, 2}, {{2, 0, 0, 1.0}}), UsageError);
    CHECK_THROWS_AS(SparseCountTensor({2, 2, 2}, {{0, 0, 0, -1.0}}), UsageError);
    CHECK_THROWS_AS(SparseCountTensor({0, 2, 2}, {}), UsageError);
    CHECK_THROWS_AS(SparseCountTensor({2, 2, 2}, {}, {LabelTable{"a"}, {}, {}}), UsageError);
    CHECK_THROWS_AS(to_mode(4), UsageError);
    CHECK_THROWS_AS(to_mode(0), UsageError);
}

TEST_CASE("single entry lands at the origin of every unfolding") {
    SparseCountTensor t({2, 2, 2}, {{0, 0, 0, 5.0}});
    for (Mode m : {Mode::One, Mode::Two, Mode::Three}) {
        const SparseMatrix u = unfold(t, m);
        CHECK(u.nonZeros() == 1);
        CHECK(u.coeff(0, 0) == 5.0);
    }
}

TEST_CASE("unfold matches the column rules and refolds losslessly") {
    Rng rng(11);
    for (int rep = 0; rep < 5; ++rep) {
        const SparseCountTensor t = random_sparse({3, 4, 5}, 10, rng);
        for (int m = 1; m <= 3; ++m) {
            const SparseMatrix u = unfold(t, to_mode(m));
            CHECK((Matrix(u) - dense_unfold(t, m)).norm() == 0.0);
            const SparseCountTensor back = fold(u, to_mode(m), t.dims());
            CHECK(back.entries() == t.entries());
        }
    }
}

TEST_CASE("vec is the column-major mode-1 unfolding") {
    Rng rng(3);
    const SparseCountTensor t = random_sparse({3, 2, 4}, 9, rng);
    const Matrix u = dense_unfold(t, 1);
    const Vector v = Eigen::Map<const Vector>(u.data(), u.size());
    CHECK((to_dense(t).vec() - v).norm() == 0.0);
    CHECK((to_dense(t).vec() - dense_vec(t)).norm() == 0.0);
}

TEST_CASE("khatri_rao by hand") {
    Matrix m1(2, 1), m2(2, 1);
    m1 << 1, 2;
    m2 << 3, 4;
    Matrix expect(4, 1);
    expect << 3, 4, 6, 8;
    CHECK((khatri_rao(m1, m2) - expect).norm() == 0.0);
    CHECK((khatri_rao(Matrix::Ones(3, 2), Matrix::Ones(4, 2)) - Matrix::Ones(12, 2)).norm() == 0.0);
    CHECK_THROWS_AS(khatri_rao(Matrix::Ones(3, 2), Matrix::Ones(3, 3)), UsageError);
}

TEST_CASE("khatri_rao columns are Kronecker products") {
    Rng rng(5);
    const Matrix m1 = random_matrix(3, 2, rng);
    const Matrix m2 = random_matrix(4, 2, rng);
    const Matrix kr = khatri_rao(m1, m2);
    for (Eigen::Index f = 0; f < 2; ++f) {
        CHECK((kr.col(f) - kron(m1.col(f), m2.col(f))).norm() < 1e-15);
    }
}

TEST_CASE("unfold of a model tensor equals A times khatri_rao(C, B) transposed") {
    Rng rng(7);
    for (int rep = 0; rep < 10; ++rep) {
        const Dims d{1 + rng.index(6), 1 + rng.index(6), 1 + rng.index(6)};
        const Eigen::Index F = 1 + static_cast<Eigen::Index>(rng.index(4));
        CpModel m = CpModel::from_factors(random_matrix(static_cast<Eigen::Index>(d[0]), F, rng),
                                          random_matrix(static_cast<Eigen::Index>(d[1]), F, rng),
                                          random_matrix(static_cast<Eigen::Index>(d[2]), F, rng));
        std::vector<Entry> e;
        for (std::size_t i = 0; i < d[0]; ++i)
            for (std::size_t j = 0; j < d[1]; ++j)
                for (std::size_t k = 0; k < d[2]; ++k) {
                    double x = 0.0;
                    for (Eigen::Index f = 0; f < F; ++f) {
                        x += m.a(static_cast<Eigen::Index>(i), f) * m.b(static_cast<Eigen::Index>(j), f) *
                             m.c(static_cast<Eigen::Index>(k), f);
                    }
                    e.push_back({i, j, k, x});
                }
        const SparseCountTensor t(d, e);
        const Matrix lhs = dense_unfold(t, 1);
        const Matrix rhs = m.a * khatri_rao(m.c, m.b).transpose();
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((dense_unfold(t, 2) - m.b * khatri_rao(m.c, m.a).transpose()).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((dense_unfold(t, 3) - m.c * khatri_rao(m.b, m.a).transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("mttkrp of an empty tensor is zero") {
    SparseCountTensor t({3, 3, 3}, {});
    Rng rng(1);
    const Matrix a = random_matrix(3, 2, rng), b = random_matrix(3, 2, rng), c = random_matrix(3, 2, rng);
    CHECK(mttkrp(t, {a, b, c}, Mode::One).norm() == 0.0);
}

TEST_CASE("mttkrp single nonzero by hand") {
    SparseCountTensor t({3, 3, 3}, {{1, 2, 0, 1.0}});
    Rng rng(2);
    const Matrix a = random_matrix(3, 2, rng), b = random_matrix(3, 2, rng), c = random_matrix(3, 2, rng);
    const Matrix m = mttkrp(t, {a, b, c}, Mode::One);
    CHECK((m.row(1) - b.row(2).cwiseProduct(c.row(0))).norm() < 1e-15);
    CHECK(m.row(0).norm() == 0.0);
    CHECK(m.row(2).norm() == 0.0);
}

TEST_CASE("mttkrp matches the dense product") {
    Rng rng(9);
    for (int rep = 0; rep < 30; ++rep) {
        const Dims d{1 + rng.index(6), 1 + rng.index(6), 1 + rng.index(6)};
        const auto F = static_cast<Eigen::Index>(1 + rng.index(4));
        const SparseCountTensor t = random_sparse(d, 1 + rng.index(40), rng);
        const Matrix a = random_matrix(static_cast<Eigen::Index>(d[0]), F, rng);
        const Matrix b = random_matrix(static_cast<Eigen::Index>(d[1]), F, rng);
        const Matrix c = random_matrix(static_cast<Eigen::Index>(d[2]), F, rng);
        CHECK((mttkrp(t, {a, b, c}, Mode::One) - dense_unfold(t, 1) * khatri_rao(c, b)).norm() < 1e-12);
        CHECK((mttkrp(t, {a, b, c}, Mode::Two) - dense_unfold(t, 2) * khatri_rao(c, a)).norm() < 1e-12);
        CHECK((mttkrp(t, {a, b, c}, Mode::Three) - dense_unfold(t, 3) * khatri_rao(b, a)).norm() < 1e-12);
    }
}

TEST_CASE("mttkrp rejects mismatched factors") {
    SparseCountTensor t({3, 3, 3}, {{0, 0, 0, 1.0}});
    const Matrix a = Matrix::Ones(3, 2), b = Matrix::Ones(4, 2), c = Matrix::Ones(3, 3);
    CHECK_THROWS_AS(mttkrp(t, {a, b, a}, Mode::One), UsageError);
    CHECK_THROWS_AS(mttkrp(t, {a, a, c}, Mode::One), UsageError);
}

TEST_CASE("ttm with the identity copies the tensor") {
    Rng rng(4);
    const SparseCountTensor t = random_sparse({3, 4, 2}, 8, rng);
    for (Mode m : {Mode::One, Mode::Two, Mode::Three}) {
        const DenseTensor y = ttm_dense(t, Matrix::Identity(static_cast<Eigen::Index>(t.dim(m)),
                                                            static_cast<Eigen::Index>(t.dim(m))), m);
        CHECK(y.values() == to_dense(t).values());
    }
}

TEST_CASE("ttm scales a single entry by the row weight") {
    SparseCountTensor t({2, 2, 2}, {{1, 0, 1, 4.0}});
    Matrix m(2, 2);
    m << 2, 0, 0, 3;
    const DenseTensor y = ttm_dense(t, m, Mode::One);
    CHECK(y(1, 0, 1) == 12.0);
    CHECK(y(0, 0, 1) == 0.0);
}

TEST_CASE("ttm matches the Kronecker matrix applied to vec") {
    Rng rng(12);
    for (int rep = 0; rep < 20; ++rep) {
        const Dims d{1 + rng.index(5), 1 + rng.index(5), 1 + rng.index(5)};
        const SparseCountTensor t = random_sparse(d, 1 + rng.index(20), rng);
        const Vector v = dense_vec(t);
        const auto I = static_cast<Eigen::Index>(d[0]);
        const auto J = static_cast<Eigen::Index>(d[1]);
        const auto K = static_cast<Eigen::Index>(d[2]);
        const Matrix m1 = random_matrix(1 + static_cast<Eigen::Index>(rng.index(4)), I, rng);
        const Matrix m2 = random_matrix(1 + static_cast<Eigen::Index>(rng.index(4)), J, rng);
        const Matrix m3 = random_matrix(1 + static_cast<Eigen::Index>(rng.index(4)), K, rng);
        const Matrix eye_i = Matrix::Identity(I, I), eye_j = Matrix::Identity(J, J), eye_k = Matrix::Identity(K, K);
        CHECK((ttm_dense(t, m1, Mode::One).vec() - kron(eye_k, kron(eye_j, m1)) * v).norm() < 1e-10);
        CHECK((ttm_dense(t, m2, Mode::Two).vec() - kron(eye_k, kron(m2, eye_i)) * v).norm() < 1e-10);
        CHECK((ttm_dense(t, m3, Mode::Three).vec() - kron(m3, kron(eye_j, eye_i)) * v).norm() < 1e-10);
        const Vector all = kron(m3, kron(m2, m1)) * v;
        CHECK((ttm_all(t, m1, m2, m3).vec() - all).norm() < 1e-10);
    }
}

TEST_CASE("sequential ttm commutes across modes") {
    Rng rng(21);
    const SparseCountTensor t = random_sparse({4, 3, 5}, 25, rng);
    const DenseTensor x = to_dense(t);
    const Matrix m1 = random_matrix(2, 4, rng), m2 = random_matrix(3, 3, rng), m3 = random_matrix(2, 5, rng);
    const DenseTensor a = ttm_dense(ttm_dense(ttm_dense(x, m1, Mode::One), m2, Mode::Two), m3, Mode::Three);
    const DenseTensor b = ttm_dense(ttm_dense(ttm_dense(x, m3, Mode::Three), m1, Mode::One), m2, Mode::Two);
    const DenseTensor c = ttm_dense(ttm_dense(ttm_dense(t, m2, Mode::Two), m3, Mode::Three), m1, Mode::One);
    CHECK((a.vec() - b.vec()).norm() < 1e-10);
    CHECK((a.vec() - c.vec()).norm() < 1e-10);
    CHECK((a.vec() - ttm_all(t, m1, m2, m3).vec()).norm() < 1e-10);
}

TEST_CASE("ttm rejects a column mismatch") {
    SparseCountTensor t({2, 3, 4}, {{0, 0, 0, 1.0}});
    CHECK_THROWS_AS(ttm_dense(t, Matrix::Ones(2, 3), Mode::One), UsageError);
}

TEST_CASE("text format round trip keeps labels") {
    SparseCountTensor t({2, 3, 2}, {{0, 1, 1, 2.5}, {1, 2, 0, 7.0}},
                       {LabelTable{"201939", "2544"}, LabelTable{"a", "b c", "d"}, LabelTable{"1", "OT"}});
    std::stringstream ss;
    write_tensor(ss, t);
    const SparseCountTensor back = read_tensor(ss);
    CHECK(back == t);
}

TEST_CASE("malformed tensor text is a data error") {
    std::stringstream bad("dims 2 2\n");
    CHECK_THROWS_AS(read_tensor(bad), DataError);
    std::stringstream out_of_range("dims 2 2 2\n0 0 5 1\n");
    CHECK_THROWS_AS(read_tensor(out_of_range), DataError);
}

TEST_CASE("label ordering is numeric for integers") {
    CHECK(label_less("9", "10"));
    CHECK_FALSE(label_less("10", "9"));
    CHECK(label_less("10", "OT"));
    CHECK(label_less("a", "b"));
}

}
