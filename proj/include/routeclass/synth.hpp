#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "routeclass/geometry.hpp"
#include "routeclass/route_tree.hpp"
#include "routeclass/tracking.hpp"

namespace routeclass {

/// Seedable generator with hand-rolled uniform and normal draws. mt19937_64
/// output is pinned by the standard; the distributions in <random> are not,
/// so corpora built through this stay bit-identical across platforms.
class PortableRng {
public:
    explicit PortableRng(std::uint64_t seed) : engine_(seed) {}

    double uniform01() {  // [0, 1)
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + uniform01() * (hi - lo); }

    double normal() {  // Box-Muller, one value per call
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform01();  // (0, 1], keeps the log finite
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Recipe for one synthetic labeled route.
struct SynthSpec {
    std::string template_name;
    double target_scale = 15.0;  // bounding-box long axis, yards
    double noise_sigma = 0.0;    // per-point isotropic Gaussian, yards
    std::size_t point_count = 50;
    double jitter_break = 0.0;   // break-depth perturbation, fraction of the leg
    std::uint64_t seed = 0;
};

inline void validate_spec(const SynthSpec& spec) {
    if (!(spec.target_scale > 0.0))
        throw std::invalid_argument("target_scale must be positive");
    if (spec.noise_sigma < 0.0)
        throw std::invalid_argument("noise_sigma must be non-negative");
    if (spec.point_count < 2 || spec.point_count > 51)
        throw std::invalid_argument("point_count must be in [2, 51]");
    if (spec.jitter_break < 0.0 || spec.jitter_break >= 0.5)
        throw std::invalid_argument("jitter_break must be in [0, 0.5)");
}

/// Perturb a template into a plausible game route: scale the waypoints to
/// the target size, slide each break point along its incoming leg, resample
/// to the requested cardinality, then add Gaussian noise. The start is
/// re-anchored to (0,0) afterwards. Deterministic for a given seed.
inline CanonicalRoute generate(const SynthSpec& spec, const TemplateSet& set) {
    validate_spec(spec);
    const Template* tpl = set.find(spec.template_name);
    if (!tpl)
        throw std::invalid_argument("unknown template: " + spec.template_name);

    PortableRng rng(spec.seed);

    const BoundingBox box = bounding_box(tpl->waypoints);
    const double long_axis = std::max(box.width(), box.height());
    Polyline waypoints = scale_uniform(tpl->waypoints, spec.target_scale / long_axis);

    // Break jitter: interior waypoints slide along the segment leading into
    // them, so stems lengthen or shorten without changing break angles.
    for (std::size_t i = 1; i + 1 < waypoints.size(); ++i) {
        const double leg = dist(waypoints[i - 1], waypoints[i]);
        if (leg == 0.0)
            continue;
        const double slide = rng.uniform(-1.0, 1.0) * spec.jitter_break * leg;
        const double ux = (waypoints[i].x - waypoints[i - 1].x) / leg;
        const double uy = (waypoints[i].y - waypoints[i - 1].y) / leg;
        waypoints[i].x += slide * ux;
        waypoints[i].y += slide * uy;
    }

    Polyline points = resample_to_count(waypoints, spec.point_count);
    if (spec.noise_sigma > 0.0) {
        for (Point& p : points) {
            p.x += rng.normal() * spec.noise_sigma;
            p.y += rng.normal() * spec.noise_sigma;
        }
    }
    const Point start = points.front();
    for (Point& p : points) {
        p.x -= start.x;
        p.y -= start.y;
    }

    CanonicalRoute route;
    route.id = {"synth", "0", "1"};
    route.position = "WR";
    route.points = std::move(points);
    route.cutoff_s = static_cast<double>(spec.point_count - 1) * 0.1;
    route.ball_offset = {5.0, 0.0};
    return route;
}

struct LabeledCorpus {
    std::vector<CanonicalRoute> routes;
    std::vector<std::pair<RouteId, std::string>> labels;
};

/// Concatenate n_per_spec draws of every spec; route i of a spec uses seed
/// spec.seed + i, and play ids number the corpus sequentially.
inline LabeledCorpus generate_corpus(const std::vector<SynthSpec>& specs,
                                     std::size_t n_per_spec, const TemplateSet& set) {
    LabeledCorpus corpus;
    std::size_t play = 0;
    for (const SynthSpec& spec : specs) {
        for (std::size_t i = 0; i < n_per_spec; ++i) {
            SynthSpec derived = spec;
            derived.seed = spec.seed + i;
            CanonicalRoute route = generate(derived, set);
            route.id = {"synth", std::to_string(++play), "1"};
            corpus.labels.emplace_back(route.id, spec.template_name);
            corpus.routes.push_back(std::move(route));
        }
    }
    return corpus;
}

/// Render canonical routes back into a tracking CSV (default schema, one
/// play per route, attacking right, receiver left of the ball). Used to
/// drive the ingest pipeline with data of known labels.
inline std::string synthetic_tracking_csv(const std::vector<CanonicalRoute>& routes) {
    std::ostringstream os;
    os.precision(17);
    os << "gameId,playId,nflId,x,y,event,playDirection,frame.id,position\n";
    // canonical (cx, cy) -> field (snap_x + cy, snap_y - cx), attacking right
    const double snap_x = 30.0, snap_y = 26.0;
    for (const CanonicalRoute& route : routes) {
        const std::string game = route.id.game_id.empty() ? "1" : route.id.game_id;
        const std::string play = route.id.play_id;
        const std::string player = route.id.player_id.empty() ? "1" : route.id.player_id;
        const std::string position = route.position.empty() ? "WR" : route.position;
        // ball at canonical offset (+5, 0) from the receiver
        os << game << "," << play << ",," << (snap_x + route.ball_offset.y) << ","
           << (snap_y - route.ball_offset.x) << ",ball_snap,right,1,\n";
        for (std::size_t i = 0; i < route.points.size(); ++i) {
            const Point& p = route.points[i];
            const char* event = i == 0                         ? "ball_snap"
                                : i + 1 == route.points.size() ? "pass_outcome_caught"
                                                               : "";
            os << game << "," << play << "," << player << "," << (snap_x + p.y) << ","
               << (snap_y - p.x) << "," << event << ",right," << (i + 1) << ","
               << position << "\n";
        }
    }
    return os.str();
}

}  // namespace routeclass
