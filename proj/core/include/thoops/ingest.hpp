#pragma once

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "thoops/court.hpp"
#include "thoops/tensor.hpp"

namespace thoops {

enum class CoordUnit { Feet, Tenths };

/// Distance between the two baskets, in feet. A point past the half-court
/// bound is reflected through the midpoint onto the near half.
inline constexpr double kBasketToBasket = 83.5;

/// Map a raw court location into the offensive half court: points past
/// bounds.y_max are reflected to (-x, kBasketToBasket - y).
CourtPoint normalize_location(CourtPoint p, const CourtBounds& bounds);

struct ShotEvent {
    std::string game_id;
    std::string player_id;
    std::string player_name;
    std::string team_id;
    double x = 0.0;  // feet
    double y = 0.0;  // feet
    int period_raw = 1;
    std::string game_clock;
    bool made = false;

    friend bool operator==(const ShotEvent&, const ShotEvent&) = default;
};

struct ShotFormat {
    char delimiter = ',';
    CoordUnit unit = CoordUnit::Feet;
    /// Escalate the >10% skipped-rows warning to a DataError.
    bool strict = false;
    CourtBounds bounds;

    std::string game_id = "game_id";
    std::string player_id = "player_id";
    std::string player_name = "player_name";
    std::string team_id = "team_id";
    std::string loc_x = "loc_x";
    std::string loc_y = "loc_y";
    std::string period = "period";
    std::string game_clock = "game_clock";
    std::string made = "shot_made_flag";
};

struct ShotParseResult {
    std::vector<ShotEvent> events;
    std::size_t rows = 0;
    std::size_t skipped = 0;
    std::vector<std::string> warnings;
};

/// Delimited text with a header row. Required columns: player id, location,
/// period and made flag; the rest are optional. Rows that fail to parse or
/// fall outside the half court are skipped and counted.
ShotParseResult parse_shots(std::istream& in, const ShotFormat& format = {});

/// Writes the default shot-CSV header and one row per event.
void write_shots_csv(std::ostream& out, const std::vector<ShotEvent>& events,
                     CoordUnit unit = CoordUnit::Feet);

enum class ShotFilter { Made, Missed };

/// Number of period slots; every overtime shares the last one.
inline constexpr std::size_t kPeriodSlots = 5;

struct ShotTensor {
    SparseCountTensor tensor;
    /// Events whose location no zone covers.
    std::size_t skipped = 0;
};

/// players x zones x 5 counts of the filtered shots; period index is
/// min(period_raw, 5) - 1. Players are ordered by id.
ShotTensor build_shot_tensor(const std::vector<ShotEvent>& events, ShotFilter filter,
                             const CourtZoneMap& map);

/// Shot-clock bins, one per second.
inline constexpr std::size_t kShotClockBins = 24;
inline constexpr int kPlayersPerSide = 5;

struct PossessionSnapshot {
    std::string possession_id;
    int shot_clock_bin = 1;            // 1..24
    std::vector<int> zone_counts;      // length Z, sum <= 5

    friend bool operator==(const PossessionSnapshot&, const PossessionSnapshot&) = default;
};

struct TrackingFormat {
    CoordUnit unit = CoordUnit::Feet;
};

struct TrackingParseResult {
    std::vector<PossessionSnapshot> snapshots;
    std::size_t frames = 0;
    std::size_t skipped_frames = 0;
    std::vector<std::string> dropped_possessions;
    std::vector<std::string> warnings;
};

/// Line-delimited JSON moments:
///   {"possession_id": .., "shot_clock": .., "offense_team_id": ..,
///    "players": [{"team_id": .., "x": .., "y": ..}, ...]}
///
/// For each possession and each second s in 1..24 the frame whose shot
/// clock is nearest to s is kept, provided it lies within half a second
/// (ties keep the earlier frame). Offensive players are counted per zone.
/// Frames without a shot clock or with more than five offensive players
/// are skipped; possessions left with no usable frame are dropped.
TrackingParseResult parse_tracking(std::istream& in, const CourtZoneMap& map,
                                   const TrackingFormat& format = {});

/// zones x 24 x possessions occupancy counts, possessions ordered by id.
SparseCountTensor build_possession_tensor(const std::vector<PossessionSnapshot>& snapshots,
                                          const CourtZoneMap& map);

}  // namespace thoops
