#include <doctest.h>

#include <cmath>
#include <sstream>

#include "thoops/court.hpp"
#include "thoops/error.hpp"
#include "thoops/random.hpp"

using namespace thoops;

TEST_SUITE("court") {

TEST_CASE("default map has the expected zones") {
    const CourtZoneMap& map = default_court_zones();
    CHECK(map.size() == 13);
    CHECK(map.find("corner_3_left") == std::optional<std::size_t>(7));
    CHECK(map.find("corner_3_right") == std::optional<std::size_t>(8));
    CHECK_FALSE(map.find("nowhere").has_value());
}

TEST_CASE("every in-bounds probe on a 0.1 ft grid gets a zone") {
    const CourtZoneMap& map = default_court_zones();
    const CourtBounds& b = map.bounds();
    std::size_t misses = 0, probes = 0;
    for (long xi = std::lround(b.x_min * 10); xi <= std::lround(b.x_max * 10); ++xi) {
        for (long yi = std::lround(std::ceil(b.y_min * 10)); yi <= std::lround(b.y_max * 10); ++yi) {
            ++probes;
            if (!assign_zone(xi / 10.0, yi / 10.0, map)) ++misses;
        }
    }
    CHECK(probes > 250000);
    CHECK(misses == 0);
}

TEST_CASE("shared boundaries go to the lowest id") {
    const CourtZoneMap& map = default_court_zones();
    CHECK(assign_zone(4.0, -2.0, map) == std::optional<std::size_t>(0));   // restricted area | paint
    CHECK(assign_zone(-8.0, 0.0, map) == std::optional<std::size_t>(1));   // paint | baseline mid
    CHECK(assign_zone(-22.0, 0.0, map) == std::optional<std::size_t>(2));  // baseline mid | corner
    CHECK(assign_zone(0.0, 41.75, map) == std::optional<std::size_t>(10)); // above break | backcourt
    CHECK(assign_zone(0.0, 0.0, map) == std::optional<std::size_t>(0));
    CHECK(assign_zone(-23.5, 5.0, map) == std::optional<std::size_t>(7));
    CHECK(assign_zone(0.0, 30.0, map) == std::optional<std::size_t>(10));
}

TEST_CASE("points outside the bounds have no zone") {
    const CourtZoneMap& map = default_court_zones();
    CHECK_FALSE(assign_zone(0.0, 47.5, map).has_value());
    CHECK_FALSE(assign_zone(25.5, 10.0, map).has_value());
    CHECK_FALSE(assign_zone(0.0, -6.0, map).has_value());
}

TEST_CASE("annular sectors") {
    const AnnularSector s{2.0, 4.0, 0.0, 90.0};
    CHECK(region_contains(s, {3.0, 0.5}));
    CHECK(region_contains(s, {0.0, 4.0}));
    CHECK(region_on_boundary(s, {0.0, 4.0}));
    CHECK_FALSE(region_contains(s, {-1.0, 3.0}));
    CHECK_FALSE(region_contains(s, {1.0, 0.5}));
    const AnnularSector full{0.0, 1.0, 0.0, 360.0};
    CHECK(region_contains(full, {0.0, 0.0}));
    CHECK(region_contains(full, {-0.5, -0.5}));
}

TEST_CASE("zone map text round trip") {
    std::stringstream in("bounds -10 10 0 10\n"
                         "zone 0 ring annular_sector 0 3 0 360\n"
                         "zone 1 left polygon -10 0 0 0 0 10 -10 10\n"
                         "zone 2 right polygon 0 0 10 0 10 10 0 10\n");
    const CourtZoneMap map = read_zone_map(in);
    CHECK(map.size() == 3);
    CHECK(assign_zone(0.5, 0.5, map) == std::optional<std::size_t>(0));
    CHECK(assign_zone(0.0, 5.0, map) == std::optional<std::size_t>(1));
    std::stringstream out;
    write_zone_map(out, map);
    const CourtZoneMap back = read_zone_map(out);
    CHECK(back.names() == map.names());
    Rng rng(2);
    for (int n = 0; n < 200; ++n) {
        const double x = rng.uniform(-10, 10), y = rng.uniform(0, 10);
        CHECK(assign_zone(x, y, back) == assign_zone(x, y, map));
    }
}

TEST_CASE("malformed zone maps are data errors") {
    auto parse = [](const std::string& text) {
        std::stringstream in(text);
        return read_zone_map(in);
    };
    CHECK_THROWS_AS(parse(""), DataError);
    CHECK_THROWS_AS(parse("zone 1 a polygon 0 0 1 0 1 1\n"), DataError);
    CHECK_THROWS_AS(parse("zone 0 a polygon 0 0 1 0\n"), DataError);
    CHECK_THROWS_AS(parse("zone 0 a annular_sector 3 1 0 90\n"), DataError);
    CHECK_THROWS_AS(parse("zone 0 a polygon 0 0 1 0 1 1\nzone 1 a polygon 0 0 1 0 1 1\n"), DataError);
    CHECK_THROWS_AS(parse("zone 0 a hexagon 1\n"), DataError);
}

TEST_CASE("sampled points land back in their zone") {
    const CourtZoneMap& map = default_court_zones();
    Rng rng(11);
    for (std::size_t z = 0; z < map.size(); ++z)
        for (int n = 0; n < 100; ++n) {
            const CourtPoint p = sample_in_zone(map, z, rng);
            CHECK(assign_zone(p.x, p.y, map) == std::optional<std::size_t>(z));
        }
}

}
