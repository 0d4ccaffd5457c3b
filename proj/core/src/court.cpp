#include "thoops/court.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "thoops/error.hpp"
#include "thoops/random.hpp"

namespace thoops {

namespace detail {
extern const char* const kDefaultZoneMapText;
}

namespace {

constexpr double kDegree = std::numbers::pi / 180.0;

double segment_distance(CourtPoint p, CourtPoint a, CourtPoint b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = len2 > 0.0 ? ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2 : 0.0;
    t = std::clamp(t, 0.0, 1.0);
    return std::hypot(p.x - (a.x + t * dx), p.y - (a.y + t * dy));
}

bool polygon_on_boundary(const Polygon& poly, CourtPoint p, double tol) {
    const auto& v = poly.vertices;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if (segment_distance(p, v[j], v[i]) <= tol) return true;
    }
    return false;
}

bool polygon_interior(const Polygon& poly, CourtPoint p) {
    const auto& v = poly.vertices;
    bool inside = false;
    for (std::size_t i = 0, j = v.size() - 1; i < v.size(); j = i++) {
        if ((v[i].y > p.y) != (v[j].y > p.y)) {
            const double x_cross = v[j].x + (p.y - v[j].y) * (v[i].x - v[j].x) / (v[i].y - v[j].y);
            if (p.x < x_cross) inside = !inside;
        }
    }
    return inside;
}

double sector_span(const AnnularSector& s) { return s.end_deg - s.start_deg; }

// Angle of p measured from start_deg, in [0, 360).
double sector_offset(const AnnularSector& s, CourtPoint p) {
    double deg = std::atan2(p.y, p.x) / kDegree - s.start_deg;
    deg = std::fmod(deg, 360.0);
    if (deg < 0.0) deg += 360.0;
    return deg;
}

bool sector_contains(const AnnularSector& s, CourtPoint p, double tol) {
    const double r = std::hypot(p.x, p.y);
    if (r < s.r_inner - tol || r > s.r_outer + tol) return false;
    if (sector_span(s) >= 360.0 || r <= tol) return r <= tol ? s.r_inner <= tol : true;
    const double off = sector_offset(s, p);
    // Arc-length tolerance at this radius, expressed in degrees.
    const double ang_tol = tol / std::max(r, tol) / kDegree;
    return off <= sector_span(s) + ang_tol || off >= 360.0 - ang_tol;
}

bool sector_on_boundary(const AnnularSector& s, CourtPoint p, double tol) {
    if (!sector_contains(s, p, tol)) return false;
    const double r = std::hypot(p.x, p.y);
    if (std::abs(r - s.r_outer) <= tol) return true;
    if (s.r_inner > 0.0 && std::abs(r - s.r_inner) <= tol) return true;
    if (sector_span(s) >= 360.0) return false;
    for (double deg : {s.start_deg, s.end_deg}) {
        const CourtPoint a{s.r_inner * std::cos(deg * kDegree), s.r_inner * std::sin(deg * kDegree)};
        const CourtPoint b{s.r_outer * std::cos(deg * kDegree), s.r_outer * std::sin(deg * kDegree)};
        if (segment_distance(p, a, b) <= tol) return true;
    }
    return false;
}

void validate_region(const Region& region, const std::string& name) {
    if (const auto* poly = std::get_if<Polygon>(&region)) {
        if (poly->vertices.size() < 3) throw DataError("zone " + name + ": polygon needs 3 vertices");
    } else {
        const auto& s = std::get<AnnularSector>(region);
        if (s.r_inner < 0.0 || !(s.r_outer > s.r_inner)) {
            throw DataError("zone " + name + ": annular sector radii must satisfy 0 <= r_in < r_out");
        }
        if (!(s.end_deg > s.start_deg) || s.end_deg - s.start_deg > 360.0) {
            throw DataError("zone " + name + ": sector angles must satisfy start < end <= start + 360");
        }
    }
}

}  // namespace

bool region_contains(const Region& region, CourtPoint p, double tol) {
    if (const auto* poly = std::get_if<Polygon>(&region)) {
        return polygon_on_boundary(*poly, p, tol) || polygon_interior(*poly, p);
    }
    return sector_contains(std::get<AnnularSector>(region), p, tol);
}

bool region_on_boundary(const Region& region, CourtPoint p, double tol) {
    if (const auto* poly = std::get_if<Polygon>(&region)) return polygon_on_boundary(*poly, p, tol);
    return sector_on_boundary(std::get<AnnularSector>(region), p, tol);
}

BoundingBox bounding_box(const Region& region) {
    if (const auto* poly = std::get_if<Polygon>(&region)) {
        BoundingBox box{poly->vertices.front(), poly->vertices.front()};
        for (const CourtPoint& v : poly->vertices) {
            box.lo.x = std::min(box.lo.x, v.x);
            box.lo.y = std::min(box.lo.y, v.y);
            box.hi.x = std::max(box.hi.x, v.x);
            box.hi.y = std::max(box.hi.y, v.y);
        }
        return box;
    }
    const auto& s = std::get<AnnularSector>(region);
    std::vector<CourtPoint> candidates;
    for (double r : {s.r_inner, s.r_outer}) {
        for (double deg : {s.start_deg, s.end_deg}) {
            candidates.push_back({r * std::cos(deg * kDegree), r * std::sin(deg * kDegree)});
        }
    }
    for (int quadrant = -4; quadrant <= 8; ++quadrant) {
        const double deg = 90.0 * quadrant;
        if (deg >= s.start_deg && deg <= s.end_deg) {
            candidates.push_back({s.r_outer * std::cos(deg * kDegree), s.r_outer * std::sin(deg * kDegree)});
        }
    }
    BoundingBox box{candidates.front(), candidates.front()};
    for (const CourtPoint& v : candidates) {
        box.lo.x = std::min(box.lo.x, v.x);
        box.lo.y = std::min(box.lo.y, v.y);
        box.hi.x = std::max(box.hi.x, v.x);
        box.hi.y = std::max(box.hi.y, v.y);
    }
    return box;
}

CourtZoneMap::CourtZoneMap(std::vector<Zone> zones, CourtBounds bounds)
    : zones_(std::move(zones)), bounds_(bounds) {
    if (zones_.empty()) throw DataError("zone map has no zones");
    for (std::size_t z = 0; z < zones_.size(); ++z) {
        if (zones_[z].id != z) throw DataError("zone ids must run 0..Z-1 in record order");
        if (zones_[z].name.empty()) throw DataError("zone " + std::to_string(z) + " has no name");
        validate_region(zones_[z].region, zones_[z].name);
        for (std::size_t y = 0; y < z; ++y) {
            if (zones_[y].name == zones_[z].name) throw DataError("duplicate zone name " + zones_[z].name);
        }
    }
    if (!(bounds_.x_max > bounds_.x_min) || !(bounds_.y_max > bounds_.y_min)) {
        throw DataError("zone map bounds are empty");
    }
}

std::vector<std::string> CourtZoneMap::names() const {
    std::vector<std::string> out;
    out.reserve(zones_.size());
    for (const Zone& z : zones_) out.push_back(z.name);
    return out;
}

std::optional<std::size_t> CourtZoneMap::find(const std::string& name) const {
    for (const Zone& z : zones_) {
        if (z.name == name) return z.id;
    }
    return std::nullopt;
}

std::optional<std::size_t> assign_zone(double x, double y, const CourtZoneMap& map) {
    const CourtPoint p{x, y};
    if (!std::isfinite(x) || !std::isfinite(y) || !map.bounds().contains(p)) return std::nullopt;
    for (const Zone& z : map.zones()) {
        if (region_contains(z.region, p)) return z.id;
    }
    return std::nullopt;
}

CourtZoneMap read_zone_map(std::istream& in) {
    std::vector<Zone> zones;
    CourtBounds bounds;
    std::string line;
    std::size_t line_no = 0;
    auto fail = [&](const std::string& why) {
        throw DataError("zone map line " + std::to_string(line_no) + ": " + why);
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string tag;
        ls >> tag;
        if (tag == "bounds") {
            ls >> bounds.x_min >> bounds.x_max >> bounds.y_min >> bounds.y_max;
            if (!ls) fail("bad bounds record");
        } else if (tag == "zone") {
            Zone z;
            std::string kind;
            ls >> z.id >> z.name >> kind;
            if (!ls) fail("bad zone record");
            if (kind == "polygon") {
                Polygon poly;
                double x = 0.0;
                double y = 0.0;
                while (ls >> x >> y) poly.vertices.push_back({x, y});
                if (!ls.eof()) fail("bad polygon vertex list");
                z.region = std::move(poly);
            } else if (kind == "annular_sector") {
                AnnularSector s;
                ls >> s.r_inner >> s.r_outer >> s.start_deg >> s.end_deg;
                if (!ls) fail("bad annular_sector parameters");
                z.region = s;
            } else {
                fail("unknown region type '" + kind + "'");
            }
            zones.push_back(std::move(z));
        } else {
            fail("unknown record '" + tag + "'");
        }
    }
    return CourtZoneMap(std::move(zones), bounds);
}

CourtZoneMap load_zone_map(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open zone map " + path);
    return read_zone_map(in);
}

void write_zone_map(std::ostream& out, const CourtZoneMap& map) {
    const CourtBounds& b = map.bounds();
    out << std::setprecision(17);
    out << "bounds " << b.x_min << ' ' << b.x_max << ' ' << b.y_min << ' ' << b.y_max << '\n';
    for (const Zone& z : map.zones()) {
        out << "zone " << z.id << ' ' << z.name << ' ';
        if (const auto* poly = std::get_if<Polygon>(&z.region)) {
            out << "polygon";
            for (const CourtPoint& v : poly->vertices) out << ' ' << v.x << ' ' << v.y;
        } else {
            const auto& s = std::get<AnnularSector>(z.region);
            out << "annular_sector " << s.r_inner << ' ' << s.r_outer << ' ' << s.start_deg << ' '
                << s.end_deg;
        }
        out << '\n';
    }
}

const CourtZoneMap& default_court_zones() {
    static const CourtZoneMap map = [] {
        std::istringstream in(detail::kDefaultZoneMapText);
        return read_zone_map(in);
    }();
    return map;
}

CourtPoint sample_in_zone(const CourtZoneMap& map, std::size_t zone, Rng& rng) {
    const Zone& z = map.zone(zone);
    constexpr int kMaxDraws = 1000000;
    if (const auto* s = std::get_if<AnnularSector>(&z.region)) {
        for (int draw = 0; draw < kMaxDraws; ++draw) {
            const double r2 = s->r_inner * s->r_inner +
                              rng.uniform() * (s->r_outer * s->r_outer - s->r_inner * s->r_inner);
            const double deg = s->start_deg + rng.uniform() * (s->end_deg - s->start_deg);
            const CourtPoint p{std::sqrt(r2) * std::cos(deg * kDegree),
                               std::sqrt(r2) * std::sin(deg * kDegree)};
            if (assign_zone(p.x, p.y, map) == zone) return p;
        }
    } else {
        const BoundingBox box = bounding_box(z.region);
        for (int draw = 0; draw < kMaxDraws; ++draw) {
            const CourtPoint p{rng.uniform(box.lo.x, box.hi.x), rng.uniform(box.lo.y, box.hi.y)};
            if (assign_zone(p.x, p.y, map) == zone) return p;
        }
    }
    throw DataError("zone " + z.name + " has no samplable interior");
}

}  // namespace thoops
