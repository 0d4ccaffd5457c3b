#include "thoops/ingest.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "thoops/error.hpp"

namespace thoops {

namespace {

std::vector<std::string> split_row(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char ch = line[i];
        if (quoted) {
            if (ch == '"' && i + 1 < line.size() && line[i + 1] == '"') {
                field.push_back('"');
                ++i;
            } else if (ch == '"') {
                quoted = false;
            } else {
                field.push_back(ch);
            }
        } else if (ch == '"') {
            quoted = true;
        } else if (ch == delim) {
            fields.push_back(std::move(field));
            field.clear();
        } else {
            field.push_back(ch);
        }
    }
    fields.push_back(std::move(field));
    return fields;
}

std::string trim(std::string s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

std::optional<double> to_double(const std::string& s) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<long long> to_integer(const std::string& s) {
    long long v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last) return std::nullopt;
    return v;
}

double unit_scale(CoordUnit unit) { return unit == CoordUnit::Tenths ? 0.1 : 1.0; }

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char ch : s) {
        if (ch == '"') out.push_back('"');
        out.push_back(ch);
    }
    out.push_back('"');
    return out;
}

}  // namespace

CourtPoint normalize_location(CourtPoint p, const CourtBounds& bounds) {
    if (p.y > bounds.y_max) return {-p.x, kBasketToBasket - p.y};
    return p;
}

ShotParseResult parse_shots(std::istream& in, const ShotFormat& format) {
    ShotParseResult result;
    std::string line;
    if (!std::getline(in, line)) throw DataError("shot file is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::vector<std::string> header = split_row(line, format.delimiter);
    for (auto& h : header) h = trim(h);

    auto column = [&](const std::string& name, bool required) -> std::optional<std::size_t> {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            if (required) throw DataError("shot file is missing required column '" + name + "'");
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const auto c_player = column(format.player_id, true);
    const auto c_x = column(format.loc_x, true);
    const auto c_y = column(format.loc_y, true);
    const auto c_period = column(format.period, true);
    const auto c_made = column(format.made, true);
    const auto c_game = column(format.game_id, false);
    const auto c_name = column(format.player_name, false);
    const auto c_team = column(format.team_id, false);
    const auto c_clock = column(format.game_clock, false);

    const double scale = unit_scale(format.unit);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty()) continue;
        ++result.rows;
        const std::vector<std::string> f = split_row(line, format.delimiter);
        if (f.size() != header.size()) {
            ++result.skipped;
            continue;
        }
        auto get = [&](const std::optional<std::size_t>& c) {
            return c ? trim(f[*c]) : std::string{};
        };
        const auto x = to_double(get(c_x));
        const auto y = to_double(get(c_y));
        const auto period = to_integer(get(c_period));
        const auto made = to_integer(get(c_made));
        const std::string player = get(c_player);
        if (!x || !y || !period || *period < 1 || !made || (*made != 0 && *made != 1) ||
            player.empty()) {
            ++result.skipped;
            continue;
        }
        const CourtPoint p = normalize_location({*x * scale, *y * scale}, format.bounds);
        if (!format.bounds.contains(p)) {
            ++result.skipped;
            continue;
        }
        ShotEvent e;
        e.game_id = get(c_game);
        e.player_id = player;
        e.player_name = get(c_name);
        e.team_id = get(c_team);
        e.x = p.x;
        e.y = p.y;
        e.period_raw = static_cast<int>(*period);
        e.game_clock = get(c_clock);
        e.made = *made == 1;
        result.events.push_back(std::move(e));
    }
    if (result.rows > 0 && 10 * result.skipped > result.rows) {
        const std::string msg = "skipped " + std::to_string(result.skipped) + " of " +
                                std::to_string(result.rows) + " shot rows (more than 10%)";
        if (format.strict) throw DataError(msg);
        result.warnings.push_back(msg);
    }
    return result;
}

void write_shots_csv(std::ostream& out, const std::vector<ShotEvent>& events, CoordUnit unit) {
    const double scale = 1.0 / unit_scale(unit);
    out << "game_id,player_id,player_name,team_id,loc_x,loc_y,period,game_clock,shot_made_flag\n";
    out << std::setprecision(17);
    for (const ShotEvent& e : events) {
        out << csv_field(e.game_id) << ',' << csv_field(e.player_id) << ','
            << csv_field(e.player_name) << ',' << csv_field(e.team_id) << ',' << e.x * scale << ','
            << e.y * scale << ',' << e.period_raw << ',' << csv_field(e.game_clock) << ','
            << (e.made ? 1 : 0) << '\n';
    }
}

ShotTensor build_shot_tensor(const std::vector<ShotEvent>& events, ShotFilter filter,
                             const CourtZoneMap& map) {
    const bool want_made = filter == ShotFilter::Made;
    std::vector<const ShotEvent*> kept;
    for (const ShotEvent& e : events) {
        if (e.made == want_made) kept.push_back(&e);
    }
    if (kept.empty()) {
        throw UsageError(std::string("no ") + (want_made ? "made" : "missed") + " shots to build a tensor from");
    }

    LabelTable players;
    for (const ShotEvent* e : kept) players.push_back(e->player_id);
    std::sort(players.begin(), players.end(), label_less);
    players.erase(std::unique(players.begin(), players.end()), players.end());
    std::unordered_map<std::string, std::size_t> player_index;
    for (std::size_t p = 0; p < players.size(); ++p) player_index.emplace(players[p], p);

    ShotTensor out;
    std::vector<Entry> entries;
    entries.reserve(kept.size());
    for (const ShotEvent* e : kept) {
        const auto zone = assign_zone(e->x, e->y, map);
        if (!zone) {
            ++out.skipped;
            continue;
        }
        const auto period = static_cast<std::size_t>(std::min<int>(e->period_raw, kPeriodSlots));
        entries.push_back({player_index.at(e->player_id), *zone, period - 1, 1.0});
    }
    if (entries.empty()) throw UsageError("no filtered shot falls inside a court zone");
    out.tensor = SparseCountTensor({players.size(), map.size(), kPeriodSlots}, std::move(entries),
                                   {players, map.names(), {"1", "2", "3", "4", "OT"}});
    return out;
}

namespace {

std::optional<std::string> json_id(const nlohmann::json& v) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
    if (v.is_number_float()) {
        const double d = v.get<double>();
        if (std::floor(d) == d) return std::to_string(static_cast<long long>(d));
        return v.dump();
    }
    return std::nullopt;
}

struct BinChoice {
    double distance = 1.0;  // > 0.5 means empty
    std::vector<int> counts;
};

struct PossessionState {
    std::size_t usable_frames = 0;
    std::array<BinChoice, kShotClockBins> bins;
};

}  // namespace

TrackingParseResult parse_tracking(std::istream& in, const CourtZoneMap& map,
                                   const TrackingFormat& format) {
    TrackingParseResult result;
    const double scale = unit_scale(format.unit);
    std::map<std::string, PossessionState, decltype(&label_less)> possessions(&label_less);
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        ++result.frames;
        nlohmann::json rec = nlohmann::json::parse(line, nullptr, false);
        if (rec.is_discarded() || !rec.is_object() || !rec.contains("possession_id")) {
            ++result.skipped_frames;
            continue;
        }
        const auto pid = json_id(rec["possession_id"]);
        if (!pid) {
            ++result.skipped_frames;
            continue;
        }
        PossessionState& state = possessions[*pid];
        const auto clock_it = rec.find("shot_clock");
        const auto offense_it = rec.find("offense_team_id");
        const auto players_it = rec.find("players");
        if (clock_it == rec.end() || !clock_it->is_number() || offense_it == rec.end() ||
            players_it == rec.end() || !players_it->is_array()) {
            ++result.skipped_frames;
            continue;
        }
        const auto offense = json_id(*offense_it);
        const double clock = clock_it->get<double>();
        if (!offense || !std::isfinite(clock)) {
            ++result.skipped_frames;
            continue;
        }
        std::vector<int> counts(map.size(), 0);
        int offensive = 0;
        bool malformed = false;
        for (const auto& player : *players_it) {
            if (!player.is_object() || !player.contains("team_id") || !player.contains("x") ||
                !player.contains("y") || !player["x"].is_number() || !player["y"].is_number()) {
                malformed = true;
                break;
            }
            if (json_id(player["team_id"]) != offense) continue;
            ++offensive;
            const CourtPoint p = normalize_location(
                {player["x"].get<double>() * scale, player["y"].get<double>() * scale}, map.bounds());
            if (const auto zone = assign_zone(p.x, p.y, map)) ++counts[*zone];
        }
        if (malformed || offensive > kPlayersPerSide) {
            ++result.skipped_frames;
            continue;
        }
        ++state.usable_frames;
        for (double s : {std::floor(clock), std::ceil(clock)}) {
            if (s < 1.0 || s > static_cast<double>(kShotClockBins)) continue;
            const double distance = std::abs(clock - s);
            BinChoice& bin = state.bins[static_cast<std::size_t>(s) - 1];
            if (distance <= 0.5 && distance < bin.distance) {
                bin.distance = distance;
                bin.counts = counts;
            }
        }
    }

    for (auto& [pid, state] : possessions) {
        if (state.usable_frames == 0) {
            result.dropped_possessions.push_back(pid);
            result.warnings.push_back("possession " + pid + " has no usable frames; dropped");
            continue;
        }
        for (std::size_t b = 0; b < kShotClockBins; ++b) {
            if (state.bins[b].distance > 0.5) continue;
            result.snapshots.push_back({pid, static_cast<int>(b + 1), std::move(state.bins[b].counts)});
        }
    }
    return result;
}

SparseCountTensor build_possession_tensor(const std::vector<PossessionSnapshot>& snapshots,
                                          const CourtZoneMap& map) {
    if (snapshots.empty()) throw UsageError("no possession snapshots to build a tensor from");
    LabelTable possessions;
    for (const auto& s : snapshots) possessions.push_back(s.possession_id);
    std::sort(possessions.begin(), possessions.end(), label_less);
    possessions.erase(std::unique(possessions.begin(), possessions.end()), possessions.end());
    std::unordered_map<std::string, std::size_t> index;
    for (std::size_t p = 0; p < possessions.size(); ++p) index.emplace(possessions[p], p);

    std::vector<Entry> entries;
    for (const auto& s : snapshots) {
        if (s.shot_clock_bin < 1 || s.shot_clock_bin > static_cast<int>(kShotClockBins)) {
            throw UsageError("snapshot shot-clock bin out of range");
        }
        if (s.zone_counts.size() != map.size()) {
            throw UsageError("snapshot zone count vector does not match the zone map");
        }
        int sum = 0;
        for (std::size_t z = 0; z < s.zone_counts.size(); ++z) {
            const int count = s.zone_counts[z];
            if (count < 0) throw UsageError("negative zone count");
            sum += count;
            if (count > 0) {
                entries.push_back({z, static_cast<std::size_t>(s.shot_clock_bin - 1),
                                   index.at(s.possession_id), static_cast<double>(count)});
            }
        }
        if (sum > kPlayersPerSide) throw UsageError("snapshot has more than five offensive players");
    }
    LabelTable bins;
    for (std::size_t b = 1; b <= kShotClockBins; ++b) bins.push_back(std::to_string(b));
    SparseCountTensor tensor({map.size(), kShotClockBins, possessions.size()}, std::move(entries),
                             {map.names(), bins, possessions});
    for (const Entry& e : tensor.entries()) {
        if (e.value > kPlayersPerSide) {
            throw UsageError("duplicate snapshots push a zone count above five");
        }
    }
    return tensor;
}

}  // namespace thoops
