#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

#include "routeclass/geometry.hpp"
#include "routeclass/route_tree.hpp"
#include "routeclass/tracking.hpp"

namespace routeclass {

/// Weight on the scaled-route term of the distance. The scaled template is
/// never larger than the game route, so its term is down-weighted; 1 means
/// both directions count equally.
struct Gamma {
    explicit Gamma(double v = 0.5) : value(v) {
        if (!(v > 0.0) || v > 1.0)
            throw std::invalid_argument("gamma must be in (0, 1]");
    }
    double value;
};

struct ClassifyConfig {
    Gamma gamma{0.5};
    double step_yards = 0.5;
    double blocking_threshold_yards = 4.0;
    bool include_exact_endpoint = false;
};

enum class BoundAxis { horizontal, vertical };
enum class ShiftAxis { x, y };

inline const char* to_string(ShiftAxis a) { return a == ShiftAxis::x ? "x" : "y"; }

struct DegenerateRouteError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Template after origin alignment and largest-discrepancy scaling: its
/// bounding box fits inside the game route's box, flush on bound_axis.
struct ScaledTemplate {
    std::string name;
    Polyline points;      // origin-aligned waypoints, scaled
    double scale_factor = 1.0;
    BoundAxis bound_axis = BoundAxis::horizontal;
};

/// Half-yard shift offsets along the unbound axis, {0, step, ..., w
/// rounded down to a step}. With include_exact_endpoint the final slack
/// position w itself is appended when it is not already on the grid.
struct ShiftGrid {
    ShiftAxis axis = ShiftAxis::y;
    double w = 0.0;
    std::vector<double> offsets;
};

namespace detail {

// Ratio of template extent to game extent along one axis. The conventions
// keep the scale factor finite and the scaled box inside the game box:
// a zero game extent with a nonzero template extent forces the template to
// collapse (ratio +inf), a zero template extent never binds (ratio 0), and
// two zero extents cancel (ratio 1).
inline double extent_ratio(double template_extent, double game_extent) {
    if (game_extent == 0.0 && template_extent == 0.0)
        return 1.0;
    if (game_extent == 0.0)
        return std::numeric_limits<double>::infinity();
    if (template_extent == 0.0)
        return 0.0;
    return template_extent / game_extent;
}

}  // namespace detail

/// Scale a template down onto a game route: align both bounding boxes at
/// the origin, take the larger of the width and height ratios, and shrink
/// the template by its inverse. Aspect ratio is preserved, so the scaled
/// box touches the game box on the binding axis and leaves slack on the
/// other. The game route must have nonzero extent on at least one axis.
inline ScaledTemplate scale_template(const Template& tpl, const Polyline& game_points) {
    const Polyline tpl0 = translate_to_origin(tpl.waypoints);
    const Polyline game0 = translate_to_origin(game_points);
    const BoundingBox tbox = bounding_box(tpl0);
    const BoundingBox gbox = bounding_box(game0);
    if (gbox.width() == 0.0 && gbox.height() == 0.0)
        throw DegenerateRouteError("game route has zero extent on both axes");

    const double r_h = detail::extent_ratio(tbox.width(), gbox.width());
    const double r_v = detail::extent_ratio(tbox.height(), gbox.height());
    const double r_max = std::max(r_h, r_v);

    ScaledTemplate scaled;
    scaled.name = tpl.name;
    scaled.bound_axis = r_h >= r_v ? BoundAxis::horizontal : BoundAxis::vertical;
    if (std::isinf(r_max))
        scaled.scale_factor = 0.0;  // template must collapse onto the zero-extent axis
    else if (r_max == 0.0)
        scaled.scale_factor = 1.0;  // point template, size is meaningless
    else
        scaled.scale_factor = 1.0 / r_max;
    scaled.points.reserve(tpl0.size());
    for (const Point& p : tpl0)
        scaled.points.push_back({p.x * scaled.scale_factor, p.y * scaled.scale_factor});
    return scaled;
}

/// Build the grid of shift offsets for a scaled template. The scaled box is
/// flush with the game box on the binding axis, so the shift runs along the
/// other one, over the remaining slack w.
inline ShiftGrid shift_grid(const ScaledTemplate& scaled, const Polyline& game_points,
                            double step_yards = 0.5, bool include_exact_endpoint = false) {
    if (!(step_yards > 0.0))
        throw std::invalid_argument("shift step must be positive");
    const BoundingBox sbox = bounding_box(scaled.points);
    const BoundingBox gbox = bounding_box(translate_to_origin(game_points));

    ShiftGrid grid;
    grid.axis = scaled.bound_axis == BoundAxis::horizontal ? ShiftAxis::y : ShiftAxis::x;
    grid.w = std::max(std::abs(gbox.width() - sbox.width()),
                      std::abs(gbox.height() - sbox.height()));

    // Tolerate float dust in w/step so exact multiples stay exact.
    const auto full_steps =
        static_cast<std::size_t>(std::floor(grid.w / step_yards + 1e-9));
    grid.offsets.reserve(full_steps + 2);
    for (std::size_t i = 0; i <= full_steps; ++i)
        grid.offsets.push_back(static_cast<double>(i) * step_yards);
    if (include_exact_endpoint && grid.w > grid.offsets.back() + 1e-9)
        grid.offsets.push_back(grid.w);
    return grid;
}

struct RouteDistance {
    double d_route = 0.0;
    double d_game = 0.0;
    double d_scaled = 0.0;
};

/// Bidirectional weighted distance between a game route and a scaled,
/// shifted template polyline: sum of point-to-polyline minima in both
/// directions, the scaled side weighted by gamma. The scaled polyline must
/// already carry at least as many points as the game route.
inline RouteDistance route_distance(const Polyline& game, const Polyline& scaled_shifted,
                                    const Gamma& gamma) {
    require_polyline(game);
    require_polyline(scaled_shifted);
    if (scaled_shifted.size() < game.size())
        throw std::invalid_argument(
            "scaled polyline has fewer points than the game route; resample it first");
    RouteDistance d;
    for (const Point& p : game)
        d.d_game += min_distance_to_polyline(p, scaled_shifted);
    for (const Point& q : scaled_shifted)
        d.d_scaled += min_distance_to_polyline(q, game);
    d.d_route = d.d_game + gamma.value * d.d_scaled;
    return d;
}

/// Everything the grid search needs for one (template, route) pair. The
/// augmented polyline is resampled once; shifting only translates it.
struct PreparedTemplate {
    ScaledTemplate scaled;
    Polyline augmented;  // >= game point count, evenly filled by arc length
    ShiftGrid grid;
};

inline PreparedTemplate prepare_template(const Template& tpl, const Polyline& game_points,
                                         const ClassifyConfig& config = {}) {
    PreparedTemplate prep;
    prep.scaled = scale_template(tpl, game_points);
    prep.augmented = resample_to_count(
        prep.scaled.points, std::max(prep.scaled.points.size(), game_points.size()));
    prep.grid = shift_grid(prep.scaled, game_points, config.step_yards,
                           config.include_exact_endpoint);
    return prep;
}

inline Polyline shifted_polyline(const Polyline& p, ShiftAxis axis, double offset) {
    return axis == ShiftAxis::x ? translate(p, offset, 0.0) : translate(p, 0.0, offset);
}

struct ShiftSpec {
    ShiftAxis axis = ShiftAxis::y;
    double offset = 0.0;
};

struct MatchResult {
    RouteId id;
    std::string position;
    std::string label;
    bool blocking = false;
    std::string best_template;
    double best_distance = 0.0;
    ShiftSpec best_shift;
    double d_game = 0.0;
    double d_scaled = 0.0;
    std::map<std::string, double> per_template;  // min d_route over all shifts
};

/// Label one route: apply the blocking/bubble pre-filter, otherwise run
/// every template through the shift grid search and take the argmin of the
/// weighted distance. Ties break to the lexicographically smallest label.
inline MatchResult classify_route(const CanonicalRoute& route, const TemplateSet& set,
                                  const ClassifyConfig& config = {}) {
    if (set.templates.empty())
        throw std::invalid_argument("template set is empty");
    require_polyline(route.points);

    MatchResult result;
    result.id = route.id;
    result.position = route.position;

    if (movement_extent(route) <= config.blocking_threshold_yards) {
        result.label = kBlockingLabel;
        result.blocking = true;
        return result;
    }

    const Polyline game = translate_to_origin(route.points);
    const PolylineIndex game_index(game);

    std::vector<const Template*> ordered;
    ordered.reserve(set.templates.size());
    for (const Template& t : set.templates)
        ordered.push_back(&t);
    std::sort(ordered.begin(), ordered.end(),
              [](const Template* a, const Template* b) { return a->name < b->name; });

    bool first = true;
    for (const Template* tpl : ordered) {
        const PreparedTemplate prep = prepare_template(*tpl, game, config);
        const std::size_t n_offsets = prep.grid.offsets.size();
        const bool shift_x = prep.grid.axis == ShiftAxis::x;

        // Distance to the shifted template equals distance from the
        // back-shifted point to the unshifted template. The scaled waypoints
        // trace the same curve as the augmented polyline, so the game side
        // only needs the handful of waypoint segments.
        std::vector<double> d_game_at(n_offsets, 0.0);
        for (std::size_t k = 0; k < n_offsets; ++k) {
            const double dx = shift_x ? prep.grid.offsets[k] : 0.0;
            const double dy = shift_x ? 0.0 : prep.grid.offsets[k];
            double sum = 0.0;
            for (const Point& p : game)
                sum += min_distance_to_polyline({p.x - dx, p.y - dy}, prep.scaled.points);
            d_game_at[k] = sum;
        }

        // Sweep the offsets per augmented point so the nearest-segment hint
        // stays hot across the half-yard steps.
        std::vector<double> d_scaled_at(n_offsets, 0.0);
        std::size_t hint = 0;
        for (const Point& q : prep.augmented) {
            for (std::size_t k = 0; k < n_offsets; ++k) {
                const double dx = shift_x ? prep.grid.offsets[k] : 0.0;
                const double dy = shift_x ? 0.0 : prep.grid.offsets[k];
                d_scaled_at[k] += game_index.min_distance({q.x + dx, q.y + dy}, hint);
            }
        }

        RouteDistance best{};
        double best_offset = 0.0;
        bool tpl_first = true;
        for (std::size_t k = 0; k < n_offsets; ++k) {
            RouteDistance d{0.0, d_game_at[k], d_scaled_at[k]};
            d.d_route = d.d_game + config.gamma.value * d.d_scaled;
            if (tpl_first || d.d_route < best.d_route) {
                best = d;
                best_offset = prep.grid.offsets[k];
                tpl_first = false;
            }
        }

        result.per_template[tpl->name] = best.d_route;
        if (first || best.d_route < result.best_distance) {
            result.best_template = tpl->name;
            result.best_distance = best.d_route;
            result.best_shift = {prep.grid.axis, best_offset};
            result.d_game = best.d_game;
            result.d_scaled = best.d_scaled;
            first = false;
        }
    }
    result.label = result.best_template;
    return result;
}

struct BatchError {
    std::size_t index = 0;
    RouteId id;
    std::string message;
};

struct BatchResult {
    std::vector<MatchResult> results;  // successes, input order preserved
    std::vector<BatchError> errors;
};

/// classify_route over a list; per-route failures are collected instead of
/// aborting the batch.
inline BatchResult classify_batch(const std::vector<CanonicalRoute>& routes,
                                  const TemplateSet& set,
                                  const ClassifyConfig& config = {}) {
    BatchResult out;
    out.results.reserve(routes.size());
    for (std::size_t i = 0; i < routes.size(); ++i) {
        try {
            out.results.push_back(classify_route(routes[i], set, config));
        } catch (const std::exception& e) {
            out.errors.push_back({i, routes[i].id, e.what()});
        }
    }
    return out;
}

/// Symmetric variant used for group medoids: both direction sums at full
/// weight, no scaling and no shift search.
inline double symmetric_distance(const Polyline& a, const Polyline& b) {
    double total = 0.0;
    for (const Point& p : a)
        total += min_distance_to_polyline(p, b);
    for (const Point& q : b)
        total += min_distance_to_polyline(q, a);
    return total;
}

/// Index of the group member minimizing the summed symmetric distance to
/// the rest of the group.
inline std::size_t medoid_index(const std::vector<Polyline>& group) {
    if (group.empty())
        throw std::invalid_argument("medoid of an empty group");
    std::size_t best = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < group.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < group.size(); ++j)
            if (i != j)
                sum += symmetric_distance(group[i], group[j]);
        if (sum < best_sum) {
            best_sum = sum;
            best = i;
        }
    }
    return best;
}

}  // namespace routeclass
