#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace thoops {

class Rng;

/// Court coordinates in feet: origin at the basket center, x across the
/// court, y toward half court.
struct CourtPoint {
    double x = 0.0;
    double y = 0.0;
};

struct Polygon {
    std::vector<CourtPoint> vertices;
};

/// Ring sector centered on the basket. Angles in degrees, counterclockwise
/// from +x; the sector spans start_deg .. end_deg.
struct AnnularSector {
    double r_inner = 0.0;
    double r_outer = 0.0;
    double start_deg = 0.0;
    double end_deg = 360.0;
};

using Region = std::variant<Polygon, AnnularSector>;

struct Zone {
    std::size_t id = 0;
    std::string name;
    Region region;
};

struct CourtBounds {
    double x_min = -25.0;
    double x_max = 25.0;
    double y_min = -5.25;
    double y_max = 47.0;

    bool contains(CourtPoint p) const {
        return p.x >= x_min && p.x <= x_max && p.y >= y_min && p.y <= y_max;
    }
};

/// Boundary tolerance for point-in-region tests, in feet.
inline constexpr double kBoundaryTolerance = 1e-9;

bool region_contains(const Region& region, CourtPoint p, double tol = kBoundaryTolerance);
bool region_on_boundary(const Region& region, CourtPoint p, double tol = kBoundaryTolerance);

struct BoundingBox {
    CourtPoint lo;
    CourtPoint hi;
};
BoundingBox bounding_box(const Region& region);

/// Ordered partition of the half court. Zone ids run 0..Z-1 in record
/// order; a point on a shared boundary belongs to the lowest id.
class CourtZoneMap {
public:
    CourtZoneMap(std::vector<Zone> zones, CourtBounds bounds = {});

    std::size_t size() const { return zones_.size(); }
    const std::vector<Zone>& zones() const { return zones_; }
    const Zone& zone(std::size_t id) const { return zones_.at(id); }
    const CourtBounds& bounds() const { return bounds_; }
    std::vector<std::string> names() const;
    std::optional<std::size_t> find(const std::string& name) const;

private:
    std::vector<Zone> zones_;
    CourtBounds bounds_;
};

/// Lowest-id zone containing (x, y); nullopt outside the bounds or when no
/// zone covers the point.
std::optional<std::size_t> assign_zone(double x, double y, const CourtZoneMap& map);

/// The shipped 13-zone map (restricted area, paint, baseline and wing
/// mid-range, corner and above-the-break threes, backcourt).
const CourtZoneMap& default_court_zones();

/// Text format, one record per line:
///   bounds <x_min> <x_max> <y_min> <y_max>
///   zone <id> <name> polygon <x1> <y1> <x2> <y2> ...
///   zone <id> <name> annular_sector <r_in> <r_out> <deg_start> <deg_end>
CourtZoneMap read_zone_map(std::istream& in);
CourtZoneMap load_zone_map(const std::string& path);
void write_zone_map(std::ostream& out, const CourtZoneMap& map);

/// Uniform point inside `zone` that assign_zone maps back to it. Polygons
/// use rejection sampling in the bounding box; annular sectors are sampled
/// directly in polar coordinates.
CourtPoint sample_in_zone(const CourtZoneMap& map, std::size_t zone, Rng& rng);

}  // namespace thoops
