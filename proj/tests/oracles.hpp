#pragma once

// Brute-force reference computations for tests. These deliberately avoid the
// library's closed-form distance path: they approximate every distance by
// densely sampling candidate points.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "routeclass/geometry.hpp"

namespace oracle {

using routeclass::Point;
using routeclass::Polyline;
using routeclass::Segment;

inline double point_distance(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

/// Min distance from pt to n evenly spaced samples of the segment. The
/// distance function is 1-Lipschitz in the sample point, so the error is at
/// most segment_length / (2 n).
inline double sampled_segment_distance(const Point& pt, const Segment& s, std::size_t n) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) {
        const double t = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        const Point c{s.a.x + t * (s.b.x - s.a.x), s.a.y + t * (s.b.y - s.a.y)};
        best = std::min(best, point_distance(pt, c));
    }
    return best;
}

/// Sample count that bounds the error by ~5e-4 yards for this segment.
inline std::size_t samples_for(const Segment& s, std::size_t floor_n = 1000) {
    const double len = point_distance(s.a, s.b);
    return std::max<std::size_t>(floor_n, static_cast<std::size_t>(len * 1000.0) + 2);
}

inline double sampled_polyline_distance(const Point& pt, const Polyline& p) {
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        const Segment s{p[i], p[i + 1]};
        if (point_distance(s.a, s.b) == 0.0)
            continue;
        any = true;
        best = std::min(best, sampled_segment_distance(pt, s, samples_for(s)));
    }
    if (!any)
        return point_distance(pt, p[0]);
    return best;
}

}  // namespace oracle
