#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

#include "planted.hpp"
#include "thoops/analytics.hpp"
#include "thoops/error.hpp"

using namespace thoops;
using namespace thoops::testing;

namespace {

// Zones x shot-clock x possessions, two components.
CpModel small_possession_model() {
    Matrix zones(4, 2), clock(3, 2), poss(10, 2);
    zones << 1, 0, 1, 0, 0, 1, 0, 1;
    clock << 1, 0, 0, 1, 0, 1;
    for (Eigen::Index i = 0; i < 10; ++i) {
        poss(i, 0) = 0.1 * static_cast<double>(i + 1);
        poss(i, 1) = 0.1 * static_cast<double>(10 - i);
    }
    CpModel m = CpModel::from_factors(zones, clock, poss);
    m.labels = {LabelTable{"z0", "z1", "z2", "z3"}, LabelTable{"1", "2", "3"}, LabelTable{}};
    for (int i = 0; i < 10; ++i) m.labels[2].push_back("poss" + std::to_string(i));
    return m;
}

// Linear-interpolation quantile on a sorted copy.
double quantile7(std::vector<double> v, double tau) {
    std::sort(v.begin(), v.end());
    const double h = tau * static_cast<double>(v.size() - 1);
    const auto lo = static_cast<std::size_t>(h);
    const std::size_t hi = std::min(lo + 1, v.size() - 1);
    return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

}  // namespace

TEST_SUITE("analytics") {

TEST_CASE("orientation must use three distinct modes") {
    CHECK_NOTHROW(Orientation{}.validate());
    CHECK_THROWS_AS((Orientation{Mode::One, Mode::One, Mode::Two}.validate()), UsageError);
}

TEST_CASE("a component's own pattern matches itself") {
    const CpModel m = normalize_model(random_model({13, 24, 50}, 4, 3));
    const ComponentIndex index = build_component_index(m);
    for (std::size_t f = 0; f < 4; ++f) {
        QuerySpec q;
        q.spatial = m.a.col(static_cast<Eigen::Index>(f));
        q.temporal = m.b.col(static_cast<Eigen::Index>(f));
        q.theta = 0.99;
        const QueryResult r = query(index, q);
        CHECK(r.similarity_evaluations == 4);
        const bool found = std::any_of(r.matched.begin(), r.matched.end(), [&](const ComponentMatch& c) {
            return c.component == f && c.similarity > 0.999999;
        });
        CHECK(found);
    }
}

TEST_CASE("a threshold above one matches nothing") {
    const CpModel m = normalize_model(random_model({13, 24, 50}, 3, 4));
    const ComponentIndex index = build_component_index(m);
    QuerySpec q;
    q.spatial = m.a.col(0);
    q.temporal = m.b.col(0);
    q.theta = 1.1;
    const QueryResult r = query(index, q);
    CHECK(r.matched.empty());
    CHECK(r.hits.empty());
    CHECK(r.similarity_evaluations == 3);
}

TEST_CASE("bad query vectors") {
    const ComponentIndex index = build_component_index(small_possession_model());
    QuerySpec q;
    q.spatial = Vector::Zero(4);
    q.temporal = Vector::Zero(3);
    CHECK_THROWS_AS(query(index, q), UsageError);
    q.spatial = Vector::Ones(5);
    CHECK_THROWS_AS(query(index, q), UsageError);
    q.spatial = -Vector::Ones(4);
    CHECK_THROWS_AS(query(index, q), UsageError);
    IndexConfig bad;
    bad.tau = 1.0;
    CHECK_THROWS_AS(build_component_index(small_possession_model(), bad), UsageError);
}

TEST_CASE("postings are the entities above the column quantile") {
    const CpModel m = small_possession_model();
    const ComponentIndex index = build_component_index(m);
    for (std::size_t f = 0; f < 2; ++f) {
        const auto col = m.c.col(static_cast<Eigen::Index>(f));
        for (double tau : {0.5, 0.75, 0.9}) {
            const double cut = quantile7(std::vector<double>(col.data(), col.data() + col.size()), tau);
            CHECK(index.cutoff(f, tau) == doctest::Approx(cut));
            std::vector<std::size_t> expect;
            for (std::size_t i = 0; i < 10; ++i) {
                if (col(static_cast<Eigen::Index>(i)) > cut) expect.push_back(i);
            }
            std::vector<std::size_t> got;
            double prev = 2.0;
            for (const Posting& p : index.postings(f, tau)) {
                got.push_back(p.entity);
                CHECK(p.coefficient <= prev);
                prev = p.coefficient;
            }
            std::sort(got.begin(), got.end());
            CHECK(got == expect);
        }
    }
    CHECK(index.postings(0, 0.9).size() == 1);
    CHECK(index.postings(0, 0.9)[0].entity == 9);
}

TEST_CASE("multi-component query keeps the best score per entity") {
    const CpModel m = small_possession_model();
    const ComponentIndex index = build_component_index(m);
    QuerySpec q;
    q.spatial = Vector::Ones(4);
    q.temporal = Vector::Ones(3);
    q.theta = 0.3;
    q.tau = 0.5;
    const QueryResult r = query(index, q);
    REQUIRE(r.matched.size() == 2);

    std::map<std::size_t, double> best;
    for (const ComponentMatch& c : r.matched) {
        const auto col = m.c.col(static_cast<Eigen::Index>(c.component));
        const double cut = quantile7(std::vector<double>(col.data(), col.data() + col.size()), q.tau);
        for (std::size_t i = 0; i < 10; ++i) {
            const double coef = col(static_cast<Eigen::Index>(i));
            if (coef > cut) best[i] = std::max(best[i], c.similarity * coef);
        }
    }
    REQUIRE(r.hits.size() == best.size());
    for (std::size_t h = 0; h < r.hits.size(); ++h) {
        CHECK(r.hits[h].score == doctest::Approx(best.at(r.hits[h].entity)));
        CHECK(r.hits[h].label == "poss" + std::to_string(r.hits[h].entity));
        if (h > 0) CHECK(r.hits[h - 1].score >= r.hits[h].score);
    }
}

TEST_CASE("query files") {
    const ComponentIndex index = build_component_index(small_possession_model());
    std::stringstream in("# comment\n z1 : 2\n\n3:1.5  # trailing\nz1:1\n");
    const QuerySpec q = read_query(in, index);
    CHECK(q.spatial(1) == 3.0);
    CHECK(q.temporal(2) == 1.5);
    CHECK(q.spatial.sum() == 3.0);
    CHECK(q.tau == index.config().tau);

    auto parse = [&](const std::string& text) {
        std::stringstream s(text);
        return read_query(s, index);
    };
    CHECK_THROWS_AS(parse("z9:1\n"), DataError);
    CHECK_THROWS_AS(parse("z1:abc\n"), DataError);
    CHECK_THROWS_AS(parse("z1:-1\n"), DataError);
    CHECK_THROWS_AS(parse("z1\n"), DataError);
}

TEST_CASE("linear scan oracle by hand") {
    // zones x clock x possessions
    const SparseCountTensor t({2, 2, 3}, {{0, 0, 0, 2.0}, {1, 1, 0, 1.0}, {1, 0, 1, 3.0}, {0, 1, 2, 1.0}});
    QuerySpec q;
    q.spatial = Vector(2);
    q.spatial << 1.0, 0.5;
    q.temporal = Vector(2);
    q.temporal << 1.0, 2.0;
    // poss0: 2*1*1 + 1*0.5*2 = 3; poss1: 3*0.5*1 = 1.5; poss2: 1*1*2 = 2
    const auto hits = linear_scan_oracle(t, q, 1.5);
    REQUIRE(hits.size() == 2);
    CHECK(hits[0].entity == 0);
    CHECK(hits[0].score == doctest::Approx(3.0));
    CHECK(hits[1].entity == 2);
    CHECK(hits[1].score == doctest::Approx(2.0));
    q.spatial = Vector::Ones(3);
    CHECK_THROWS_AS(linear_scan_oracle(t, q, 0.0), UsageError);
}

TEST_CASE("synthesis from a one-hot rank-one model") {
    const CourtZoneMap& map = default_court_zones();
    Matrix a = Matrix::Zero(3, 1), b = Matrix::Zero(map.size(), 1), c = Matrix::Zero(kPeriodSlots, 1);
    a(1, 0) = 1.0;
    b(7, 0) = 1.0;
    c(4, 0) = 1.0;
    CpModel m = CpModel::from_factors(a, b, c);
    m.labels = {LabelTable{"p0", "p1", "p2"}, map.names(), LabelTable{"1", "2", "3", "4", "OT"}};
    SynthConfig sc;
    sc.made_rate = 1.0;
    const SynthResult r = generate_synthetic(m, 500, map, 3, sc);
    REQUIRE(r.events.size() == 500);
    CHECK(r.diagnostics.empty());
    for (const ShotEvent& e : r.events) {
        CHECK(e.player_id == "p1");
        CHECK(e.period_raw == 5);
        CHECK(e.made);
        CHECK(assign_zone(e.x, e.y, map) == std::optional<std::size_t>(7));
    }
    const ShotTensor t = build_shot_tensor(r.events, ShotFilter::Made, map);
    CHECK(t.tensor.nnz() == 1);
}

TEST_CASE("synthesis skips unusable components") {
    const CourtZoneMap& map = default_court_zones();
    CpModel m = CpModel::from_factors(Matrix::Ones(2, 2), Matrix::Ones(map.size(), 2), Matrix::Ones(5, 2));
    m.lambda(1) = 0.0;
    const SynthResult r = generate_synthetic(m, 10, map, 1);
    CHECK(r.diagnostics.size() == 1);
    CHECK(r.events.size() == 10);
    m.lambda(0) = 0.0;
    CHECK_THROWS_AS(generate_synthetic(m, 10, map, 1), DataError);
    m.lambda(0) = 1.0;
    CHECK_THROWS_AS(generate_synthetic(m, 0, map, 1), UsageError);
}

TEST_CASE("synthesis follows the model marginals") {
    const CourtZoneMap& map = default_court_zones();
    CpModel m = normalize_model(random_model({6, map.size(), kPeriodSlots}, 2, 12, 2.0));
    m.labels = {LabelTable{"0", "1", "2", "3", "4", "5"}, map.names(), LabelTable{"1", "2", "3", "4", "OT"}};
    const std::size_t n = 40000;
    const SynthResult r = generate_synthetic(m, n, map, 5);
    std::vector<double> zone_freq(map.size(), 0.0);
    for (const ShotEvent& e : r.events) zone_freq[*assign_zone(e.x, e.y, map)] += 1.0 / n;
    const Vector expect = m.b * m.lambda / m.lambda.sum();
    for (std::size_t z = 0; z < map.size(); ++z) {
        CHECK(std::abs(zone_freq[z] - expect(static_cast<Eigen::Index>(z))) < 0.015);
    }
}

TEST_CASE("entity clusters and csv") {
    Matrix a(12, 2);
    for (Eigen::Index i = 0; i < 12; ++i) {
        a(i, 0) = i < 6 ? 0.9 : 0.1;
        a(i, 1) = i < 6 ? 0.1 : 0.9;
        a(i, 0) += 0.001 * static_cast<double>(i);
    }
    CpModel m = CpModel::from_factors(a, Matrix::Ones(3, 2), Matrix::Ones(2, 2));
    const auto emb = embed_entities(m, Mode::One);
    REQUIRE(emb.size() == 12);
    CHECK(emb[3].entity_id == "3");
    RankSelectConfig rc;
    rc.K = 5;
    rc.f_grid = {2};
    const EntityClusters cl = cluster_entities(emb, rc);
    CHECK(cl.k == 2);
    CHECK(adjusted_rand_index(cl.labels, {0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1}) == doctest::Approx(1.0));
    std::ostringstream out;
    write_clusters_csv(out, emb, cl);
    std::istringstream lines(out.str());
    std::string header;
    std::getline(lines, header);
    CHECK(header == "entity_id,cluster,r_1,r_2");
    std::size_t rows = 0;
    for (std::string l; std::getline(lines, l);) ++rows;
    CHECK(rows == 12);
}

}
