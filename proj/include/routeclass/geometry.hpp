#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <queue>
#include <stdexcept>
#include <vector>

namespace routeclass {

/// 2-D point in yards. In the canonical frame +y is upfield and +x points
/// toward the center of the field.
struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point& a, const Point& b) {
        return a.x == b.x && a.y == b.y;
    }
};

/// Ordered sequence of points. Valid polylines have at least 2 points;
/// consecutive duplicates are allowed (zero-length segments are skipped
/// when measuring distances).
using Polyline = std::vector<Point>;

struct Segment {
    Point a;
    Point b;
};

/// Axis-aligned min/max extents of a point set (closed box).
struct BoundingBox {
    double min_x = 0.0;
    double min_y = 0.0;
    double max_x = 0.0;
    double max_y = 0.0;

    double width() const { return max_x - min_x; }
    double height() const { return max_y - min_y; }

    bool contains(const BoundingBox& inner, double tol = 0.0) const {
        return inner.min_x >= min_x - tol && inner.min_y >= min_y - tol &&
               inner.max_x <= max_x + tol && inner.max_y <= max_y + tol;
    }
};

inline bool finite(const Point& p) {
    return std::isfinite(p.x) && std::isfinite(p.y);
}

inline double dist(const Point& a, const Point& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline void require_polyline(const Polyline& p) {
    if (p.size() < 2)
        throw std::invalid_argument("polyline needs at least 2 points");
}

inline BoundingBox bounding_box(const Polyline& p) {
    require_polyline(p);
    BoundingBox box{p[0].x, p[0].y, p[0].x, p[0].y};
    for (const Point& pt : p) {
        box.min_x = std::min(box.min_x, pt.x);
        box.min_y = std::min(box.min_y, pt.y);
        box.max_x = std::max(box.max_x, pt.x);
        box.max_y = std::max(box.max_y, pt.y);
    }
    return box;
}

inline Polyline translate(const Polyline& p, double dx, double dy) {
    Polyline out(p);
    for (Point& pt : out) {
        pt.x += dx;
        pt.y += dy;
    }
    return out;
}

/// Shift the polyline so its bounding box has min_x = min_y = 0.
/// Shape is preserved exactly; idempotent.
inline Polyline translate_to_origin(const Polyline& p) {
    const BoundingBox box = bounding_box(p);
    return translate(p, -box.min_x, -box.min_y);
}

/// Squared distance from pt to the closed segment; the workhorse for the
/// minimum searches, which compare squares and take one sqrt at the end.
inline double point_segment_distance2(const Point& pt, const Segment& s) {
    const double vx = s.b.x - s.a.x;
    const double vy = s.b.y - s.a.y;
    const double len2 = vx * vx + vy * vy;
    double cx = s.a.x, cy = s.a.y;
    if (len2 > 0.0) {
        double t = ((pt.x - s.a.x) * vx + (pt.y - s.a.y) * vy) / len2;
        t = std::clamp(t, 0.0, 1.0);
        cx += t * vx;
        cy += t * vy;
    }
    const double dx = pt.x - cx;
    const double dy = pt.y - cy;
    return dx * dx + dy * dy;
}

/// Euclidean distance from pt to the closest point of the closed segment.
/// A zero-length segment is treated as a point.
inline double point_segment_distance(const Point& pt, const Segment& s) {
    return std::sqrt(point_segment_distance2(pt, s));
}

/// Minimum distance from pt to any segment of p. Zero-length segments are
/// skipped; if every segment is zero-length the polyline is a single
/// repeated point and the distance to that point is returned.
inline double min_distance_to_polyline(const Point& pt, const Polyline& p) {
    require_polyline(p);
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i + 1 < p.size(); ++i) {
        if (p[i] == p[i + 1])
            continue;
        any = true;
        best = std::min(best, point_segment_distance2(pt, {p[i], p[i + 1]}));
    }
    if (!any)
        return dist(pt, p[0]);
    return std::sqrt(best);
}

/// Add points to p until it has exactly n, never moving or dropping the
/// original vertices. New points are placed on existing segments so that
/// the arc-length gaps between consecutive points end up as equal as
/// possible: the segment currently holding the largest gap is split one
/// more time, repeatedly. The bounding box and total arc length are
/// unchanged.
inline Polyline resample_to_count(const Polyline& p, std::size_t n) {
    require_polyline(p);
    if (n < p.size())
        throw std::invalid_argument("resample_to_count cannot shrink a polyline");
    if (n == p.size())
        return p;

    const std::size_t nseg = p.size() - 1;
    std::vector<double> seg_len(nseg);
    for (std::size_t i = 0; i < nseg; ++i)
        seg_len[i] = dist(p[i], p[i + 1]);

    // pieces[i] = number of equal pieces segment i is divided into
    std::vector<std::size_t> pieces(nseg, 1);
    using Gap = std::pair<double, std::size_t>;
    auto cmp = [](const Gap& a, const Gap& b) {
        if (a.first != b.first)
            return a.first < b.first;
        return a.second > b.second;  // equal gaps: split the earlier segment
    };
    std::priority_queue<Gap, std::vector<Gap>, decltype(cmp)> heap(cmp);
    for (std::size_t i = 0; i < nseg; ++i)
        heap.push({seg_len[i], i});

    for (std::size_t added = p.size(); added < n; ++added) {
        const auto [gap, idx] = heap.top();
        heap.pop();
        ++pieces[idx];
        heap.push({seg_len[idx] / static_cast<double>(pieces[idx]), idx});
    }

    Polyline out;
    out.reserve(n);
    for (std::size_t i = 0; i < nseg; ++i) {
        out.push_back(p[i]);
        for (std::size_t k = 1; k < pieces[i]; ++k) {
            const double t = static_cast<double>(k) / static_cast<double>(pieces[i]);
            out.push_back({p[i].x + t * (p[i + 1].x - p[i].x),
                           p[i].y + t * (p[i + 1].y - p[i].y)});
        }
    }
    out.push_back(p.back());
    return out;
}

/// Multiply every coordinate by factor (> 0). Preserves the bounding-box
/// aspect ratio exactly.
inline Polyline scale_uniform(const Polyline& p, double factor) {
    require_polyline(p);
    if (!(factor > 0.0))
        throw std::invalid_argument("scale factor must be positive");
    Polyline out(p);
    for (Point& pt : out) {
        pt.x *= factor;
        pt.y *= factor;
    }
    return out;
}

/// Negate the x of every point (reflection about the y axis).
inline Polyline mirror_x(const Polyline& p) {
    Polyline out(p);
    for (Point& pt : out)
        pt.x = -pt.x;
    return out;
}

/// Rotate by exact 90-degree multiples, counterclockwise for positive
/// quarter_turns. No trigonometry, so no rounding error.
inline Polyline rotate(const Polyline& p, int quarter_turns) {
    int q = quarter_turns % 4;
    if (q < 0)
        q += 4;
    Polyline out(p);
    for (Point& pt : out) {
        switch (q) {
        case 0: break;
        case 1: pt = {-pt.y, pt.x}; break;
        case 2: pt = {-pt.x, -pt.y}; break;
        case 3: pt = {pt.y, -pt.x}; break;
        }
    }
    return out;
}

inline double arc_length(const Polyline& p) {
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < p.size(); ++i)
        total += dist(p[i], p[i + 1]);
    return total;
}

/// Nearest-segment index over a fixed polyline, for repeated minimum
/// distance queries. Segments are grouped into short arc-contiguous chunks
/// with precomputed bounding boxes; a query seeds its best squared distance
/// from a caller-kept hint, then scans the flat chunk list, skipping every
/// chunk whose box cannot beat the current best. Returns exactly the same
/// minimum as min_distance_to_polyline.
class PolylineIndex {
public:
    explicit PolylineIndex(const Polyline& p) {
        require_polyline(p);
        fallback_ = p[0];
        for (std::size_t i = 0; i + 1 < p.size(); ++i) {
            if (p[i] == p[i + 1])
                continue;
            segments_.push_back({p[i], p[i + 1]});
        }
        for (std::size_t lo = 0; lo < segments_.size(); lo += kChunk) {
            const std::size_t hi = std::min(lo + kChunk, segments_.size());
            Chunk c;
            c.lo = lo;
            c.hi = hi;
            c.box = {segments_[lo].a.x, segments_[lo].a.y, segments_[lo].a.x,
                     segments_[lo].a.y};
            for (std::size_t i = lo; i < hi; ++i) {
                const Segment& s = segments_[i];
                c.box.min_x = std::min({c.box.min_x, s.a.x, s.b.x});
                c.box.min_y = std::min({c.box.min_y, s.a.y, s.b.y});
                c.box.max_x = std::max({c.box.max_x, s.a.x, s.b.x});
                c.box.max_y = std::max({c.box.max_y, s.a.y, s.b.y});
            }
            chunks_.push_back(c);
        }
    }

    double min_distance(const Point& pt) const {
        std::size_t hint = 0;
        return min_distance(pt, hint);
    }

    /// Same minimum; hint seeds the search with one candidate segment and is
    /// updated to the winner. Consecutive queries along a trajectory tend to
    /// share their nearest segment, so the seed skips most chunks.
    double min_distance(const Point& pt, std::size_t& hint) const {
        if (segments_.empty())
            return dist(pt, fallback_);
        if (hint >= segments_.size())
            hint = 0;
        double best2 = point_segment_distance2(pt, segments_[hint]);
        std::size_t arg = hint;
        for (const Chunk& c : chunks_) {
            const double dx = std::max({c.box.min_x - pt.x, 0.0, pt.x - c.box.max_x});
            const double dy = std::max({c.box.min_y - pt.y, 0.0, pt.y - c.box.max_y});
            if (dx * dx + dy * dy >= best2)
                continue;
            for (std::size_t i = c.lo; i < c.hi; ++i) {
                const double d2 = point_segment_distance2(pt, segments_[i]);
                if (d2 < best2) {
                    best2 = d2;
                    arg = i;
                }
            }
        }
        hint = arg;
        return std::sqrt(best2);
    }

private:
    struct Chunk {
        BoundingBox box;
        std::size_t lo, hi;  // segment range [lo, hi)
    };

    static constexpr std::size_t kChunk = 8;
    std::vector<Segment> segments_;
    std::vector<Chunk> chunks_;
    Point fallback_;
};

}  // namespace routeclass
