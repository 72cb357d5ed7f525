#pragma once

#include <array>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "routeclass/geometry.hpp"

namespace routeclass {

/// Canonical route labels, alphabetical. Label order is the deterministic
/// tie-break order used by the classifier.
inline const std::vector<std::string>& route_labels() {
    static const std::vector<std::string> labels = {
        "comeback", "corner", "curl", "dig", "flat", "out",
        "post", "slant", "sluggo", "streak", "wheel"};
    return labels;
}

inline bool is_route_label(std::string_view name) {
    for (const auto& l : route_labels())
        if (l == name)
            return true;
    return false;
}

/// Label assigned to receivers that never leave their stem (blocking or
/// waiting on a bubble screen); it is not a template.
inline constexpr const char* kBlockingLabel = "blocking/bubble";

inline constexpr const char* kCanonicalFrame =
    "left-of-ball, upfield=+y, field-center=+x";

/// One pre-defined route: a named waypoint polyline starting at (0,0).
/// Waypoints are deliberately oversized relative to any real route so the
/// classifier only ever scales them down.
struct Template {
    std::string name;
    Polyline waypoints;
};

struct TemplateSet {
    std::vector<Template> templates;
    std::string canonical_frame = kCanonicalFrame;

    const Template* find(std::string_view name) const {
        for (const auto& t : templates)
            if (t.name == name)
                return &t;
        return nullptr;
    }
};

struct Violation {
    std::string template_name;  // empty for set-level rules
    std::string rule;
    std::string detail;
};

struct TemplateParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct TemplateValidationError : std::runtime_error {
    explicit TemplateValidationError(std::vector<Violation> v)
        : std::runtime_error(describe(v)), violations(std::move(v)) {}
    std::vector<Violation> violations;

private:
    static std::string describe(const std::vector<Violation>& v) {
        std::ostringstream os;
        os << "template validation failed (" << v.size() << " violation"
           << (v.size() == 1 ? "" : "s") << "):";
        for (const auto& x : v) {
            os << "\n  " << (x.template_name.empty() ? "<set>" : x.template_name)
               << ": " << x.rule;
            if (!x.detail.empty())
                os << " (" << x.detail << ")";
        }
        return os.str();
    }
};

// Minimum nonzero bounding-box extent of a template, in yards. Real routes
// top out near the 53.3-yard field width laterally and roughly 60 yards of
// sprint upfield, so anything this large always scales down onto them.
inline constexpr double kMinTemplateExtent = 40.0;

/// The built-in route tree. Shapes follow the standard receiver tree:
/// sideline breaks go to -x (the receiver lines up left of the ball),
/// center breaks go to +x. Coordinates are an order of magnitude larger
/// than any real route; only their aspect ratios matter.
inline TemplateSet builtin_route_tree() {
    TemplateSet set;
    set.templates = {
        {"flat", {{0, 0}, {-250, 50}, {-500, 100}}},
        {"slant", {{0, 0}, {0, 150}, {500, 650}}},
        {"out", {{0, 0}, {0, 600}, {-500, 600}}},
        {"dig", {{0, 0}, {0, 600}, {500, 600}}},
        {"curl", {{0, 0}, {0, 600}, {150, 450}}},
        {"comeback", {{0, 0}, {0, 600}, {-150, 450}}},
        {"corner", {{0, 0}, {0, 600}, {-350, 950}}},
        {"post", {{0, 0}, {0, 600}, {350, 950}}},
        {"streak", {{0, 0}, {0, 500}, {0, 1000}}},
        {"sluggo", {{0, 0}, {0, 100}, {250, 350}, {250, 1000}}},
        {"wheel", {{0, 0}, {-400, 80}, {-500, 250}, {-500, 1000}}},
    };
    return set;
}

/// Check every Template and TemplateSet invariant. Returns one entry per
/// broken rule; an empty result means the set is usable.
inline std::vector<Violation> validate(const TemplateSet& set) {
    std::vector<Violation> out;
    if (set.templates.empty())
        out.push_back({"", "set must not be empty", ""});
    if (set.canonical_frame != kCanonicalFrame)
        out.push_back({"", "canonical_frame mismatch", set.canonical_frame});

    for (std::size_t i = 0; i < set.templates.size(); ++i) {
        const Template& t = set.templates[i];
        for (std::size_t j = i + 1; j < set.templates.size(); ++j)
            if (set.templates[j].name == t.name)
                out.push_back({t.name, "duplicate name", ""});
        if (!is_route_label(t.name)) {
            out.push_back({t.name, "unknown route label", t.name});
            continue;
        }
        if (t.waypoints.size() < 2) {
            out.push_back({t.name, "needs at least 2 waypoints",
                           std::to_string(t.waypoints.size()) + " given"});
            continue;
        }
        bool all_finite = true;
        for (const Point& p : t.waypoints)
            if (!finite(p))
                all_finite = false;
        if (!all_finite) {
            out.push_back({t.name, "non-finite waypoint", ""});
            continue;
        }
        if (!(t.waypoints.front() == Point{0.0, 0.0}))
            out.push_back({t.name, "first waypoint must be (0,0)",
                           "(" + std::to_string(t.waypoints.front().x) + ", " +
                               std::to_string(t.waypoints.front().y) + ")"});
        const BoundingBox box = bounding_box(t.waypoints);
        for (double extent : {box.width(), box.height()}) {
            if (extent != 0.0 && extent < kMinTemplateExtent)
                out.push_back({t.name, "bounding-box extent below oversizing minimum",
                               std::to_string(extent) + " < " +
                                   std::to_string(kMinTemplateExtent)});
        }
    }
    return out;
}

/// Parse the JSON template document without validating route invariants.
inline TemplateSet parse_template_set(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw TemplateParseError(std::string("template file is not valid JSON: ") + e.what());
    }
    auto fail = [](const std::string& where, const std::string& what) -> void {
        throw TemplateParseError("template file: " + where + ": " + what);
    };
    if (!doc.is_object())
        fail("top level", "expected an object");
    if (!doc.contains("format_version") || !doc["format_version"].is_number_integer())
        fail("format_version", "missing or not an integer");
    if (doc["format_version"].get<int>() != 1)
        fail("format_version", "unsupported version " + doc["format_version"].dump());
    if (!doc.contains("frame") || !doc["frame"].is_string())
        fail("frame", "missing or not a string");
    if (!doc.contains("templates") || !doc["templates"].is_array())
        fail("templates", "missing or not an array");

    TemplateSet set;
    set.canonical_frame = doc["frame"].get<std::string>();
    set.templates.clear();
    std::size_t idx = 0;
    for (const auto& jt : doc["templates"]) {
        const std::string where = "templates[" + std::to_string(idx++) + "]";
        if (!jt.is_object())
            fail(where, "expected an object");
        if (!jt.contains("name") || !jt["name"].is_string())
            fail(where + ".name", "missing or not a string");
        if (!jt.contains("waypoints") || !jt["waypoints"].is_array())
            fail(where + ".waypoints", "missing or not an array");
        Template t;
        t.name = jt["name"].get<std::string>();
        for (const auto& jp : jt["waypoints"]) {
            if (!jp.is_array() || jp.size() != 2 || !jp[0].is_number() || !jp[1].is_number())
                fail(where + ".waypoints", "each waypoint must be [x, y]");
            t.waypoints.push_back({jp[0].get<double>(), jp[1].get<double>()});
        }
        set.templates.push_back(std::move(t));
    }
    return set;
}

/// Parse and validate; throws TemplateParseError or TemplateValidationError.
inline TemplateSet load_templates(const std::string& text) {
    TemplateSet set = parse_template_set(text);
    std::vector<Violation> violations = validate(set);
    if (!violations.empty())
        throw TemplateValidationError(std::move(violations));
    return set;
}

/// Serialize losslessly; load_templates(save_templates(s)) reproduces s
/// exactly (doubles are emitted with round-trip precision).
inline std::string save_templates(const TemplateSet& set) {
    nlohmann::json doc;
    doc["format_version"] = 1;
    doc["frame"] = set.canonical_frame;
    doc["templates"] = nlohmann::json::array();
    for (const Template& t : set.templates) {
        nlohmann::json jt;
        jt["name"] = t.name;
        jt["waypoints"] = nlohmann::json::array();
        for (const Point& p : t.waypoints)
            jt["waypoints"].push_back({p.x, p.y});
        doc["templates"].push_back(std::move(jt));
    }
    return doc.dump(2) + "\n";
}

inline bool operator==(const Template& a, const Template& b) {
    return a.name == b.name && a.waypoints == b.waypoints;
}

inline bool operator==(const TemplateSet& a, const TemplateSet& b) {
    return a.canonical_frame == b.canonical_frame && a.templates == b.templates;
}

}  // namespace routeclass
