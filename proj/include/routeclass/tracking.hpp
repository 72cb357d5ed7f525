#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "routeclass/geometry.hpp"

namespace routeclass {

/// Offense attack direction along the field x axis. `upfield` marks data
/// that is already in the canonical frame (no rotation needed).
enum class PlayDirection { left, right, upfield };

inline PlayDirection parse_direction(std::string_view s) {
    if (s == "left")
        return PlayDirection::left;
    if (s == "right")
        return PlayDirection::right;
    if (s == "upfield" || s.empty())
        return PlayDirection::upfield;
    throw std::invalid_argument("unknown play direction: " + std::string(s));
}

/// One tracking sample. player_id is empty for the ball.
struct TrackingFrame {
    std::string game_id;
    std::string play_id;
    std::string player_id;
    std::string position_code;
    double x = 0.0;          // field coords, 0..120
    double y = 0.0;          // field coords, 0..53.3
    std::int64_t timestamp_ms = 0;
    std::string event;
    PlayDirection direction = PlayDirection::right;
};

struct RouteId {
    std::string game_id;
    std::string play_id;
    std::string player_id;

    friend bool operator==(const RouteId&, const RouteId&) = default;
    friend auto operator<=>(const RouteId&, const RouteId&) = default;
};

/// Receiver trajectory clipped to [snap, min(outcome, snap + cutoff)],
/// still in field coordinates.
struct RawRoute {
    RouteId id;
    std::string position;
    Polyline points;
    Point snap_point;       // receiver position at the snap
    Point ball_snap_point;  // ball position at the snap
    double cutoff_time_s = 0.0;
    PlayDirection direction = PlayDirection::right;
};

/// Route in the canonical frame: run from the left of the ball, attacking
/// +y, starting at (0,0). ball_offset is the ball's snap position in this
/// frame (always at x >= 0).
struct CanonicalRoute {
    RouteId id;
    std::string position;
    Polyline points;
    double cutoff_s = 0.0;
    Point ball_offset{0.0, 0.0};
};

// ---------------------------------------------------------------------------
// CSV parsing

/// Maps the logical tracking fields onto column names. Defaults follow the
/// 2017 Big Data Bowl tracking files. When `timestamp_ms` is set and
/// present it wins over `frame`; otherwise timestamps come from the frame
/// index at 100 ms per frame.
struct TrackingSchema {
    char delimiter = ',';
    std::string game_id = "gameId";
    std::string play_id = "playId";
    std::string player_id = "nflId";
    std::string x = "x";
    std::string y = "y";
    std::string event = "event";
    std::string play_direction = "playDirection";
    std::string frame = "frame.id";
    std::string timestamp_ms;          // optional override
    std::string position = "position"; // inline column, optional
    std::vector<std::string> ball_markers = {"", "NA", "na", "ball"};
};

/// Join-file schema for receiver positions (players.csv style).
struct PlayersSchema {
    char delimiter = ',';
    std::string player_id = "nflId";
    std::string position = "PositionAbbr";
};

struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseReport {
    std::size_t rows_total = 0;
    std::size_t rows_skipped = 0;
    std::vector<std::pair<std::size_t, std::string>> skipped_rows;  // (line, reason)

    void skip(std::size_t line, std::string reason) {
        ++rows_skipped;
        if (skipped_rows.size() < 100)
            skipped_rows.emplace_back(line, std::move(reason));
    }
};

namespace detail {

inline std::vector<std::string> split_csv_row(const std::string& line, char delim) {
    std::vector<std::string> fields;
    std::string cur;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        const char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == delim) {
            fields.push_back(std::move(cur));
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    fields.push_back(std::move(cur));
    return fields;
}

inline std::optional<double> to_double(const std::string& s) {
    if (s.empty())
        return std::nullopt;
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size())
            return std::nullopt;
        return v;
    } catch (...) {
        return std::nullopt;
    }
}

}  // namespace detail

/// Parse a delimited tracking file. Rows whose numeric fields fail to
/// parse, or whose coordinates fall outside the field, are skipped and
/// reported by line number. Missing required columns and empty files are
/// fatal (SchemaError).
inline std::vector<TrackingFrame> parse_tracking(std::istream& in,
                                                 const TrackingSchema& schema,
                                                 ParseReport& report) {
    std::string header_line;
    if (!std::getline(in, header_line))
        throw SchemaError("tracking file is empty");
    const std::vector<std::string> header =
        detail::split_csv_row(header_line, schema.delimiter);

    auto column = [&](const std::string& name) -> int {
        for (std::size_t i = 0; i < header.size(); ++i)
            if (header[i] == name)
                return static_cast<int>(i);
        return -1;
    };
    auto required = [&](const std::string& name, const char* logical) -> int {
        const int idx = column(name);
        if (idx < 0)
            throw SchemaError(std::string("required column missing: ") + logical +
                              " (mapped to '" + name + "')");
        return idx;
    };

    const int col_game = required(schema.game_id, "game_id");
    const int col_play = required(schema.play_id, "play_id");
    const int col_player = required(schema.player_id, "player_id");
    const int col_x = required(schema.x, "x");
    const int col_y = required(schema.y, "y");
    const int col_event = required(schema.event, "event");
    const int col_dir = required(schema.play_direction, "play_direction");
    const int col_ts = schema.timestamp_ms.empty() ? -1 : column(schema.timestamp_ms);
    const int col_frame = schema.frame.empty() ? -1 : column(schema.frame);
    if (col_ts < 0 && col_frame < 0)
        throw SchemaError("no time source: neither timestamp_ms ('" + schema.timestamp_ms +
                          "') nor frame ('" + schema.frame + "') column found");
    const int col_pos = schema.position.empty() ? -1 : column(schema.position);

    auto is_ball = [&](const std::string& id) {
        return std::find(schema.ball_markers.begin(), schema.ball_markers.end(), id) !=
               schema.ball_markers.end();
    };

    std::vector<TrackingFrame> frames;
    std::string line;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line == "\r")
            continue;
        ++report.rows_total;
        const std::vector<std::string> f = detail::split_csv_row(line, schema.delimiter);
        auto field = [&](int idx) -> const std::string& {
            static const std::string empty;
            return (idx >= 0 && idx < static_cast<int>(f.size())) ? f[idx] : empty;
        };

        TrackingFrame frame;
        frame.game_id = field(col_game);
        frame.play_id = field(col_play);
        frame.player_id = field(col_player);
        if (is_ball(frame.player_id))
            frame.player_id.clear();
        frame.event = field(col_event);

        const auto x = detail::to_double(field(col_x));
        const auto y = detail::to_double(field(col_y));
        if (!x || !y) {
            report.skip(line_no, "bad coordinate: x='" + field(col_x) + "' y='" +
                                     field(col_y) + "'");
            continue;
        }
        if (*x < 0.0 || *x > 120.0 || *y < 0.0 || *y > 53.3) {
            report.skip(line_no, "coordinate out of field bounds");
            continue;
        }
        frame.x = *x;
        frame.y = *y;

        if (col_ts >= 0 && !field(col_ts).empty()) {
            const auto ts = detail::to_double(field(col_ts));
            if (!ts) {
                report.skip(line_no, "bad timestamp: '" + field(col_ts) + "'");
                continue;
            }
            frame.timestamp_ms = static_cast<std::int64_t>(*ts);
        } else if (col_frame >= 0) {
            const auto fr = detail::to_double(field(col_frame));
            if (!fr) {
                report.skip(line_no, "bad frame index: '" + field(col_frame) + "'");
                continue;
            }
            frame.timestamp_ms = static_cast<std::int64_t>((*fr - 1.0) * 100.0);
        }

        try {
            frame.direction = parse_direction(field(col_dir));
        } catch (const std::invalid_argument&) {
            report.skip(line_no, "bad play direction: '" + field(col_dir) + "'");
            continue;
        }
        if (col_pos >= 0)
            frame.position_code = field(col_pos);
        frames.push_back(std::move(frame));
    }
    if (report.rows_total == 0)
        throw SchemaError("tracking file has a header but no data rows");
    return frames;
}

/// Parse a players join file into player_id -> position. Falls back to a
/// lowercase "position" column when the configured one is absent.
inline std::map<std::string, std::string> parse_players(std::istream& in,
                                                        const PlayersSchema& schema) {
    std::string header_line;
    if (!std::getline(in, header_line))
        throw SchemaError("players file is empty");
    const std::vector<std::string> header =
        detail::split_csv_row(header_line, schema.delimiter);
    int col_id = -1, col_pos = -1, col_pos_fallback = -1;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == schema.player_id)
            col_id = static_cast<int>(i);
        if (header[i] == schema.position)
            col_pos = static_cast<int>(i);
        if (header[i] == "position")
            col_pos_fallback = static_cast<int>(i);
    }
    if (col_pos < 0)
        col_pos = col_pos_fallback;
    if (col_id < 0 || col_pos < 0)
        throw SchemaError("players file needs '" + schema.player_id + "' and '" +
                          schema.position + "' columns");
    std::map<std::string, std::string> positions;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line == "\r")
            continue;
        const std::vector<std::string> f = detail::split_csv_row(line, schema.delimiter);
        if (static_cast<int>(f.size()) <= std::max(col_id, col_pos))
            continue;
        positions[f[col_id]] = f[col_pos];
    }
    return positions;
}

// ---------------------------------------------------------------------------
// Route extraction

inline const std::vector<std::string>& outcome_events() {
    static const std::vector<std::string> events = {
        "pass_outcome_caught", "pass_outcome_incomplete",
        "pass_outcome_interception", "pass_outcome_touchdown"};
    return events;
}

inline constexpr const char* kSnapEvent = "ball_snap";

struct ExtractConfig {
    double cutoff_seconds = 5.0;
    bool include_snap_frame = true;  // off: route starts after the snap frame
    double rb_split_yards = 8.0;     // backs this far from the ball laterally count as split out
};

struct SkipRecord {
    std::string game_id;
    std::string play_id;
    std::string player_id;  // empty for play-level skips
    std::string reason;
};

struct ExtractResult {
    std::vector<RawRoute> routes;
    std::vector<SkipRecord> skips;
};

/// Pull one RawRoute per eligible receiver per play. Wide receivers and
/// tight ends are always eligible; backs only when split out at least
/// rb_split_yards laterally from the ball at the snap. Plays with no snap
/// event or no ball position at the snap are skipped with a record.
inline ExtractResult extract_routes(const std::vector<TrackingFrame>& frames,
                                    const ExtractConfig& config = {},
                                    const std::map<std::string, std::string>& positions = {}) {
    ExtractResult result;

    std::map<std::pair<std::string, std::string>, std::vector<const TrackingFrame*>> plays;
    std::vector<std::pair<std::string, std::string>> play_order;
    for (const TrackingFrame& f : frames) {
        auto key = std::make_pair(f.game_id, f.play_id);
        auto [it, inserted] = plays.try_emplace(key);
        if (inserted)
            play_order.push_back(key);
        it->second.push_back(&f);
    }

    for (const auto& key : play_order) {
        const auto& play_frames = plays[key];

        std::optional<std::int64_t> snap_ts;
        for (const TrackingFrame* f : play_frames)
            if (f->event == kSnapEvent && (!snap_ts || f->timestamp_ms < *snap_ts))
                snap_ts = f->timestamp_ms;
        if (!snap_ts) {
            result.skips.push_back({key.first, key.second, "", "no ball_snap event"});
            continue;
        }

        std::optional<std::int64_t> outcome_ts;
        for (const TrackingFrame* f : play_frames) {
            for (const auto& ev : outcome_events()) {
                if (f->event == ev && f->timestamp_ms >= *snap_ts &&
                    (!outcome_ts || f->timestamp_ms < *outcome_ts))
                    outcome_ts = f->timestamp_ms;
            }
        }
        const auto cutoff_ms = static_cast<std::int64_t>(config.cutoff_seconds * 1000.0);
        const std::int64_t end_ts =
            outcome_ts ? std::min(*outcome_ts, *snap_ts + cutoff_ms) : *snap_ts + cutoff_ms;

        std::optional<Point> ball_snap;
        for (const TrackingFrame* f : play_frames)
            if (f->player_id.empty() && f->timestamp_ms == *snap_ts)
                ball_snap = Point{f->x, f->y};
        if (!ball_snap) {
            result.skips.push_back({key.first, key.second, "", "no ball position at snap"});
            continue;
        }

        std::map<std::string, std::vector<const TrackingFrame*>> by_player;
        for (const TrackingFrame* f : play_frames)
            if (!f->player_id.empty())
                by_player[f->player_id].push_back(f);

        for (auto& [player_id, pf] : by_player) {
            std::stable_sort(pf.begin(), pf.end(),
                             [](const TrackingFrame* a, const TrackingFrame* b) {
                                 return a->timestamp_ms < b->timestamp_ms;
                             });

            std::string position = pf.front()->position_code;
            if (position.empty()) {
                auto it = positions.find(player_id);
                if (it != positions.end())
                    position = it->second;
            }

            const TrackingFrame* snap_frame = nullptr;
            for (const TrackingFrame* f : pf)
                if (f->timestamp_ms == *snap_ts) {
                    snap_frame = f;
                    break;
                }
            if (!snap_frame)
                continue;  // player not on the field at the snap

            const bool is_receiver = position == "WR" || position == "TE";
            const bool is_back = position == "RB" || position == "HB" || position == "FB";
            if (!is_receiver && !is_back)
                continue;
            if (is_back &&
                std::abs(snap_frame->y - ball_snap->y) < config.rb_split_yards) {
                result.skips.push_back(
                    {key.first, key.second, player_id, "back not split out"});
                continue;
            }

            Polyline points;
            for (const TrackingFrame* f : pf) {
                if (f->timestamp_ms > end_ts)
                    break;
                if (f->timestamp_ms < *snap_ts)
                    continue;
                if (!config.include_snap_frame && f->timestamp_ms == *snap_ts)
                    continue;
                points.push_back({f->x, f->y});
            }
            if (points.size() < 2) {
                result.skips.push_back(
                    {key.first, key.second, player_id, "fewer than 2 frames in route window"});
                continue;
            }

            RawRoute route;
            route.id = {key.first, key.second, player_id};
            route.position = position;
            route.points = std::move(points);
            route.snap_point = {snap_frame->x, snap_frame->y};
            route.ball_snap_point = *ball_snap;
            route.cutoff_time_s = static_cast<double>(end_ts - *snap_ts) / 1000.0;
            route.direction = snap_frame->direction;
            result.routes.push_back(std::move(route));
        }
    }
    return result;
}

// ---------------------------------------------------------------------------
// Canonicalization

namespace detail {

inline Point rotate_point(const Point& p, PlayDirection dir) {
    switch (dir) {
    case PlayDirection::right:  // attack +x -> +y, quarter turn CCW
        return {-p.y, p.x};
    case PlayDirection::left:   // attack -x -> +y, quarter turn CW
        return {p.y, -p.x};
    case PlayDirection::upfield:
        return p;
    }
    return p;
}

}  // namespace detail

/// Rigidly move a raw route into the canonical frame: rotate the attack
/// direction onto +y by an exact quarter turn, mirror about the y axis when
/// the receiver lined up right of the ball (ties stay unmirrored), then
/// translate the snap position to (0,0).
inline CanonicalRoute canonicalize(const RawRoute& route) {
    Point snap = detail::rotate_point(route.snap_point, route.direction);
    Point ball = detail::rotate_point(route.ball_snap_point, route.direction);
    const bool mirror = snap.x > ball.x;

    CanonicalRoute out;
    out.id = route.id;
    out.position = route.position;
    out.cutoff_s = route.cutoff_time_s;
    out.points.reserve(route.points.size());
    for (const Point& p : route.points) {
        Point q = detail::rotate_point(p, route.direction);
        if (mirror)
            q.x = -q.x;
        out.points.push_back(q);
    }
    if (mirror) {
        snap.x = -snap.x;
        ball.x = -ball.x;
    }
    for (Point& p : out.points) {
        p.x -= snap.x;
        p.y -= snap.y;
    }
    out.ball_offset = {ball.x - snap.x, ball.y - snap.y};
    return out;
}

/// Largest Euclidean displacement of any route point from the start.
inline double movement_extent(const CanonicalRoute& route) {
    if (route.points.empty())
        return 0.0;
    double extent = 0.0;
    for (const Point& p : route.points)
        extent = std::max(extent, dist(p, route.points.front()));
    return extent;
}

}  // namespace routeclass
