#pragma once

#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "routeclass/classify.hpp"
#include "routeclass/tracking.hpp"

namespace routeclass {

struct JsonlError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Identifiers may arrive as JSON numbers or strings; store them as strings.
inline std::string id_field(const nlohmann::json& j, const char* key, std::size_t line) {
    if (!j.contains(key))
        throw JsonlError("line " + std::to_string(line) + ": missing field '" + key + "'");
    const auto& v = j[key];
    if (v.is_string())
        return v.get<std::string>();
    if (v.is_number())
        return v.dump();
    throw JsonlError("line " + std::to_string(line) + ": field '" + key +
                     "' must be a string or number");
}

inline nlohmann::json parse_line(const std::string& text, std::size_t line) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw JsonlError("line " + std::to_string(line) + ": " + e.what());
    }
}

template <typename Fn>
void for_each_line(std::istream& in, Fn&& fn) {
    std::string text;
    std::size_t line = 0;
    while (std::getline(in, text)) {
        ++line;
        if (text.empty() || text == "\r")
            continue;
        fn(parse_line(text, line), line);
    }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Canonical routes

inline void write_routes(std::ostream& out, const std::vector<CanonicalRoute>& routes) {
    for (const CanonicalRoute& r : routes) {
        nlohmann::json j;
        j["game_id"] = r.id.game_id;
        j["play_id"] = r.id.play_id;
        j["player_id"] = r.id.player_id;
        j["position"] = r.position;
        j["points"] = nlohmann::json::array();
        for (const Point& p : r.points)
            j["points"].push_back({p.x, p.y});
        j["cutoff_s"] = r.cutoff_s;
        out << j.dump() << "\n";
    }
}

inline std::vector<CanonicalRoute> read_routes(std::istream& in) {
    std::vector<CanonicalRoute> routes;
    detail::for_each_line(in, [&](const nlohmann::json& j, std::size_t line) {
        CanonicalRoute r;
        r.id = {detail::id_field(j, "game_id", line), detail::id_field(j, "play_id", line),
                detail::id_field(j, "player_id", line)};
        r.position = j.value("position", std::string{});
        if (!j.contains("points") || !j["points"].is_array())
            throw JsonlError("line " + std::to_string(line) + ": missing points array");
        for (const auto& jp : j["points"]) {
            if (!jp.is_array() || jp.size() != 2 || !jp[0].is_number() || !jp[1].is_number())
                throw JsonlError("line " + std::to_string(line) +
                                 ": each point must be [x, y]");
            r.points.push_back({jp[0].get<double>(), jp[1].get<double>()});
        }
        if (r.points.size() < 2)
            throw JsonlError("line " + std::to_string(line) + ": route needs >= 2 points");
        r.cutoff_s = j.value("cutoff_s", 0.0);
        routes.push_back(std::move(r));
    });
    return routes;
}

// ---------------------------------------------------------------------------
// Match results

inline void write_results(std::ostream& out, const std::vector<MatchResult>& results) {
    for (const MatchResult& m : results) {
        nlohmann::json j;
        j["game_id"] = m.id.game_id;
        j["play_id"] = m.id.play_id;
        j["player_id"] = m.id.player_id;
        j["position"] = m.position;
        j["label"] = m.label;
        j["blocking"] = m.blocking;
        if (!m.blocking) {
            j["best_template"] = m.best_template;
            j["best_distance"] = m.best_distance;
            j["best_shift"] = {{"axis", to_string(m.best_shift.axis)},
                               {"offset", m.best_shift.offset}};
            j["d_game"] = m.d_game;
            j["d_scaled"] = m.d_scaled;
            j["per_template"] = m.per_template;
        }
        out << j.dump() << "\n";
    }
}

inline std::vector<MatchResult> read_results(std::istream& in) {
    std::vector<MatchResult> results;
    detail::for_each_line(in, [&](const nlohmann::json& j, std::size_t line) {
        MatchResult m;
        m.id = {detail::id_field(j, "game_id", line), detail::id_field(j, "play_id", line),
                detail::id_field(j, "player_id", line)};
        m.position = j.value("position", std::string{});
        if (!j.contains("label") || !j["label"].is_string())
            throw JsonlError("line " + std::to_string(line) + ": missing label");
        m.label = j["label"].get<std::string>();
        m.blocking = j.value("blocking", m.label == kBlockingLabel);
        if (!m.blocking) {
            m.best_template = j.value("best_template", m.label);
            m.best_distance = j.value("best_distance", 0.0);
            if (j.contains("best_shift")) {
                m.best_shift.axis = j["best_shift"].value("axis", "y") == std::string("x")
                                        ? ShiftAxis::x
                                        : ShiftAxis::y;
                m.best_shift.offset = j["best_shift"].value("offset", 0.0);
            }
            m.d_game = j.value("d_game", 0.0);
            m.d_scaled = j.value("d_scaled", 0.0);
            if (j.contains("per_template"))
                m.per_template =
                    j["per_template"].get<std::map<std::string, double>>();
        }
        results.push_back(std::move(m));
    });
    return results;
}

// ---------------------------------------------------------------------------
// Reference labels

inline void write_reference_labels(std::ostream& out,
                                   const std::vector<std::pair<RouteId, std::string>>& labels) {
    for (const auto& [id, label] : labels) {
        nlohmann::json j;
        j["game_id"] = id.game_id;
        j["play_id"] = id.play_id;
        j["player_id"] = id.player_id;
        j["label"] = label;
        out << j.dump() << "\n";
    }
}

inline std::vector<std::pair<RouteId, std::string>> read_reference_labels(std::istream& in) {
    std::vector<std::pair<RouteId, std::string>> labels;
    detail::for_each_line(in, [&](const nlohmann::json& j, std::size_t line) {
        if (!j.contains("label") || !j["label"].is_string())
            throw JsonlError("line " + std::to_string(line) + ": missing label");
        labels.emplace_back(
            RouteId{detail::id_field(j, "game_id", line),
                    detail::id_field(j, "play_id", line),
                    detail::id_field(j, "player_id", line)},
            j["label"].get<std::string>());
    });
    return labels;
}

}  // namespace routeclass
