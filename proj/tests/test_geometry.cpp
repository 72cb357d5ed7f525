#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "routeclass/geometry.hpp"
#include "routeclass/route_tree.hpp"

#include "oracles.hpp"

using namespace routeclass;

namespace {

Polyline random_polyline(std::mt19937& rng, std::size_t min_points = 2,
                         std::size_t max_points = 12) {
    std::uniform_int_distribution<std::size_t> count(min_points, max_points);
    std::uniform_real_distribution<double> coord(-30.0, 30.0);
    Polyline p(count(rng));
    for (Point& pt : p)
        pt = {coord(rng), coord(rng)};
    return p;
}

Point random_point(std::mt19937& rng, double lo = -30.0, double hi = 30.0) {
    std::uniform_real_distribution<double> coord(lo, hi);
    return {coord(rng), coord(rng)};
}

}  // namespace

TEST_CASE("bounding_box basics") {
    CHECK(bounding_box({{0, 0}, {0, 10}}).min_x == 0.0);
    CHECK(bounding_box({{0, 0}, {0, 10}}).max_x == 0.0);
    CHECK(bounding_box({{0, 0}, {0, 10}}).max_y == 10.0);

    const BoundingBox box = bounding_box({{1, 2}, {3, 1}, {2, 5}});
    CHECK(box.min_x == 1.0);
    CHECK(box.min_y == 1.0);
    CHECK(box.max_x == 3.0);
    CHECK(box.max_y == 5.0);

    // the post route is much taller than it is wide
    const TemplateSet tree = builtin_route_tree();
    const BoundingBox post = bounding_box(tree.find("post")->waypoints);
    CHECK(post.height() > post.width());
}

TEST_CASE("bounding_box contains every point") {
    std::mt19937 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const Polyline p = random_polyline(rng);
        const BoundingBox box = bounding_box(p);
        for (const Point& pt : p) {
            CHECK(pt.x >= box.min_x);
            CHECK(pt.x <= box.max_x);
            CHECK(pt.y >= box.min_y);
            CHECK(pt.y <= box.max_y);
        }
    }
}

TEST_CASE("translate_to_origin") {
    CHECK(translate_to_origin({{5, 5}, {5, 15}}) == Polyline{{0, 0}, {0, 10}});
    CHECK(translate_to_origin({{0, 0}, {0, 10}}) == Polyline{{0, 0}, {0, 10}});
    CHECK(translate_to_origin({{-3, 2}, {1, -1}}) == Polyline{{0, 3}, {4, 0}});

    SECTION("idempotent, shape preserved") {
        std::mt19937 rng(11);
        for (int trial = 0; trial < 50; ++trial) {
            const Polyline p = random_polyline(rng);
            const Polyline q = translate_to_origin(p);
            CHECK(translate_to_origin(q) == q);
            const BoundingBox box = bounding_box(q);
            CHECK(box.min_x == 0.0);
            CHECK(box.min_y == 0.0);
            for (std::size_t i = 1; i < p.size(); ++i) {
                CHECK(q[i].x - q[0].x == Catch::Approx(p[i].x - p[0].x).margin(1e-12));
                CHECK(q[i].y - q[0].y == Catch::Approx(p[i].y - p[0].y).margin(1e-12));
            }
        }
    }
}

TEST_CASE("point_segment_distance closed form") {
    CHECK(point_segment_distance({0, 1}, {{-1, 0}, {1, 0}}) == Catch::Approx(1.0));
    CHECK(point_segment_distance({2, 1}, {{-1, 0}, {1, 0}}) ==
          Catch::Approx(std::sqrt(2.0)));
    CHECK(point_segment_distance({3, 4}, {{0, 0}, {0, 0}}) == Catch::Approx(5.0));
}

TEST_CASE("point_segment_distance matches the dense-sampling oracle") {
    std::mt19937 rng(23);
    for (int trial = 0; trial < 1000; ++trial) {
        const Point pt = random_point(rng);
        const Segment s{random_point(rng), random_point(rng)};
        const double exact = point_segment_distance(pt, s);
        const double sampled = oracle::sampled_segment_distance(pt, s, 100000);
        CHECK(std::abs(exact - sampled) < 1e-3);

        // never better than the endpoints, never negative
        CHECK(exact >= 0.0);
        CHECK(exact <= std::min(dist(pt, s.a), dist(pt, s.b)) + 1e-12);
    }
}

TEST_CASE("min_distance_to_polyline") {
    const Polyline p{{0, 0}, {2, 0}, {2, 2}};
    CHECK(min_distance_to_polyline({2, 0}, p) == 0.0);
    CHECK(min_distance_to_polyline({1, 1}, p) == Catch::Approx(1.0));

    SECTION("zero-length segments are skipped") {
        const Polyline dup{{0, 0}, {0, 0}, {2, 0}};
        CHECK(min_distance_to_polyline({1, 1}, dup) == Catch::Approx(1.0));
        const Polyline all_dup{{3, 4}, {3, 4}, {3, 4}};
        CHECK(min_distance_to_polyline({0, 0}, all_dup) == Catch::Approx(5.0));
    }

    SECTION("matches the dense-sampling oracle") {
        std::mt19937 rng(31);
        for (int trial = 0; trial < 200; ++trial) {
            const Polyline p = random_polyline(rng, 11, 11);  // 10 segments
            const Point pt = random_point(rng);
            CHECK(std::abs(min_distance_to_polyline(pt, p) -
                           oracle::sampled_polyline_distance(pt, p)) < 1e-3);
        }
    }

    SECTION("zero exactly on segments, positive off them") {
        std::mt19937 rng(37);
        std::uniform_real_distribution<double> t01(0.0, 1.0);
        for (int trial = 0; trial < 100; ++trial) {
            const Polyline p = random_polyline(rng, 3, 8);
            std::uniform_int_distribution<std::size_t> seg(0, p.size() - 2);
            const std::size_t i = seg(rng);
            const double t = t01(rng);
            const Point on{p[i].x + t * (p[i + 1].x - p[i].x),
                           p[i].y + t * (p[i + 1].y - p[i].y)};
            CHECK(min_distance_to_polyline(on, p) < 1e-9);
        }
        CHECK(min_distance_to_polyline({1.0, 1e-6}, {{0, 0}, {2, 0}}) > 1e-9);
    }
}

TEST_CASE("resample_to_count") {
    const Polyline line{{0, 0}, {0, 10}};
    CHECK(resample_to_count(line, 2) == line);

    const Polyline five = resample_to_count(line, 5);
    REQUIRE(five.size() == 5);
    for (std::size_t i = 0; i < 5; ++i) {
        CHECK(five[i].x == Catch::Approx(0.0).margin(1e-12));
        CHECK(five[i].y == Catch::Approx(2.5 * static_cast<double>(i)).margin(1e-12));
    }

    CHECK_THROWS_AS(resample_to_count(line, 1), std::invalid_argument);

    SECTION("keeps vertices, bounding box, and arc length") {
        std::mt19937 rng(41);
        for (int trial = 0; trial < 50; ++trial) {
            const Polyline p = random_polyline(rng, 2, 8);
            const std::size_t n = p.size() + static_cast<std::size_t>(trial);
            const Polyline out = resample_to_count(p, n);
            REQUIRE(out.size() == n);

            const BoundingBox a = bounding_box(p);
            const BoundingBox b = bounding_box(out);
            CHECK(a.min_x == b.min_x);
            CHECK(a.min_y == b.min_y);
            CHECK(a.max_x == b.max_x);
            CHECK(a.max_y == b.max_y);

            CHECK(arc_length(out) ==
                  Catch::Approx(arc_length(p)).epsilon(1e-9).margin(1e-12));

            // every original vertex survives, in order
            std::size_t j = 0;
            for (const Point& v : p) {
                while (j < out.size() && !(out[j] == v))
                    ++j;
                CHECK(j < out.size());
            }
        }
    }

    SECTION("gaps are near-equal on a single segment") {
        const Polyline out = resample_to_count({{0, 0}, {7, 0}}, 9);
        for (std::size_t i = 0; i + 1 < out.size(); ++i)
            CHECK(out[i + 1].x - out[i].x == Catch::Approx(7.0 / 8.0));
    }
}

TEST_CASE("scale_uniform") {
    const Polyline p{{0, 0}, {2, 4}};
    CHECK(scale_uniform(p, 1.0) == p);
    CHECK(scale_uniform(p, 0.5) == Polyline{{0, 0}, {1, 2}});
    CHECK_THROWS_AS(scale_uniform(p, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(scale_uniform(p, -2.0), std::invalid_argument);

    SECTION("aspect ratio exactly preserved") {
        std::mt19937 rng(43);
        std::uniform_real_distribution<double> factor(0.1, 5.0);
        for (int trial = 0; trial < 100; ++trial) {
            const Polyline q = random_polyline(rng, 3, 10);
            const double f = factor(rng);
            const BoundingBox a = bounding_box(q);
            const BoundingBox b = bounding_box(scale_uniform(q, f));
            if (a.width() > 0.0 && a.height() > 0.0) {
                const double before = a.width() / a.height();
                const double after = b.width() / b.height();
                CHECK(after == Catch::Approx(before).epsilon(1e-12));
            }
        }
    }

    SECTION("inverse factor restores the polyline") {
        std::mt19937 rng(47);
        for (int trial = 0; trial < 50; ++trial) {
            const Polyline q = random_polyline(rng);
            const Polyline back = scale_uniform(scale_uniform(q, 3.7), 1.0 / 3.7);
            for (std::size_t i = 0; i < q.size(); ++i) {
                CHECK(back[i].x == Catch::Approx(q[i].x).epsilon(1e-9).margin(1e-9));
                CHECK(back[i].y == Catch::Approx(q[i].y).epsilon(1e-9).margin(1e-9));
            }
        }
    }
}

TEST_CASE("mirror and rotate") {
    const Polyline p{{1, 0}, {2, 3}};
    CHECK(mirror_x(p) == Polyline{{-1, 0}, {-2, 3}});
    CHECK(mirror_x(mirror_x(p)) == p);
    CHECK(rotate(p, 4) == p);
    CHECK(rotate(p, 0) == p);
    CHECK(rotate(rotate(p, 1), 3) == p);
    CHECK(rotate(p, -1) == rotate(p, 3));
    CHECK(rotate(Polyline{{1, 0}, {0, 2}}, 1) == Polyline{{0, 1}, {-2, 0}});
}

TEST_CASE("PolylineIndex agrees with the linear scan") {
    std::mt19937 rng(53);
    for (int trial = 0; trial < 100; ++trial) {
        Polyline p = random_polyline(rng, 2, 60);
        if (trial % 5 == 0)
            p.insert(p.begin() + 1, p[0]);  // throw in a zero-length segment
        const PolylineIndex index(p);
        for (int q = 0; q < 50; ++q) {
            const Point pt = random_point(rng, -50.0, 50.0);
            // equal up to FP contraction noise between the two code paths
            CHECK(index.min_distance(pt) ==
                  Catch::Approx(min_distance_to_polyline(pt, p)).epsilon(1e-12));
        }
    }

    SECTION("degenerate all-duplicate polyline") {
        const PolylineIndex index(Polyline{{3, 4}, {3, 4}});
        CHECK(index.min_distance({0, 0}) == Catch::Approx(5.0));
    }
}
