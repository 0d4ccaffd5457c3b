#include <doctest.h>

#include <cmath>
#include <vector>

#include "thoops/error.hpp"
#include "thoops/random.hpp"

using namespace thoops;

TEST_SUITE("random") {

TEST_CASE("same seed, same stream") {
    Rng a(42), b(42);
    for (int i = 0; i < 100; ++i) CHECK(a.uniform() == b.uniform());
}

TEST_CASE("uniform stays in range") {
    Rng r(1);
    for (int i = 0; i < 10000; ++i) {
        const double u = r.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        const double v = r.uniform_open_closed();
        CHECK(v > 0.0);
        CHECK(v <= 1.0);
    }
}

TEST_CASE("split seeds differ per stream and are reproducible") {
    CHECK(split_seed(7, 1) == split_seed(7, 1));
    CHECK(split_seed(7, 1) != split_seed(7, 2));
    CHECK(split_seed(7, 1) != split_seed(8, 1));
}

TEST_CASE("weighted draws follow the weights") {
    Rng r(3);
    const std::vector<double> w{1.0, 0.0, 3.0};
    std::vector<int> counts(3, 0);
    const int n = 40000;
    for (int i = 0; i < n; ++i) ++counts[r.weighted(w)];
    CHECK(counts[1] == 0);
    CHECK(static_cast<double>(counts[2]) / n == doctest::Approx(0.75).epsilon(0.03));
    CHECK_THROWS_AS(r.weighted(std::vector<double>{0.0, 0.0}), UsageError);
}

TEST_CASE("categorical sampler matches weighted draws in law") {
    Rng r(4);
    const std::vector<double> w{0.0, 2.0, 0.0, 2.0, 0.0};
    const CategoricalSampler s(w);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 20000; ++i) ++counts[s(r)];
    CHECK(counts[0] == 0);
    CHECK(counts[2] == 0);
    CHECK(counts[4] == 0);
    CHECK(static_cast<double>(counts[1]) / 20000 == doctest::Approx(0.5).epsilon(0.05));
    CHECK_THROWS_AS(CategoricalSampler(std::vector<double>{-1.0, 2.0}), UsageError);
}

TEST_CASE("poisson mean and variance") {
    Rng r(5);
    for (double mean : {0.5, 4.0, 40.0, 800.0}) {
        const int n = 20000;
        double s = 0.0, s2 = 0.0;
        for (int i = 0; i < n; ++i) {
            const auto x = static_cast<double>(r.poisson(mean));
            s += x;
            s2 += x * x;
        }
        const double m = s / n;
        const double var = s2 / n - m * m;
        CHECK(m == doctest::Approx(mean).epsilon(0.03));
        CHECK(var == doctest::Approx(mean).epsilon(0.08));
    }
    CHECK(r.poisson(0.0) == 0);
}

TEST_CASE("normal moments") {
    Rng r(6);
    const int n = 50000;
    double s = 0.0, s2 = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = r.normal();
        s += x;
        s2 += x * x;
    }
    CHECK(std::abs(s / n) < 0.02);
    CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.03));
}

}
