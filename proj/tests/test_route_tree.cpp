#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <set>

#include "routeclass/classify.hpp"
#include "routeclass/route_tree.hpp"

using namespace routeclass;

TEST_CASE("builtin route tree shape") {
    const TemplateSet tree = builtin_route_tree();
    REQUIRE(tree.templates.size() == 11);
    CHECK(tree.canonical_frame == kCanonicalFrame);
    CHECK(validate(tree).empty());

    std::set<std::string> names;
    for (const Template& t : tree.templates) {
        names.insert(t.name);
        CHECK(t.waypoints.front() == Point{0.0, 0.0});
    }
    // the nine scored labels plus curl and comeback
    const std::set<std::string> expected = {"corner", "dig",    "flat",  "out",
                                            "post",   "slant",  "sluggo", "streak",
                                            "wheel",  "curl",   "comeback"};
    CHECK(names == expected);

    CHECK(bounding_box(tree.find("streak")->waypoints).width() == 0.0);
}

TEST_CASE("template serialization round trip") {
    const TemplateSet tree = builtin_route_tree();
    const std::string text = save_templates(tree);
    const TemplateSet loaded = load_templates(text);
    CHECK(loaded == tree);
}

TEST_CASE("load rejects malformed documents") {
    CHECK_THROWS_AS(load_templates("not json at all {"), TemplateParseError);
    CHECK_THROWS_AS(load_templates("{}"), TemplateParseError);
    CHECK_THROWS_AS(load_templates(R"({"format_version":2,"frame":"x","templates":[]})"),
                    TemplateParseError);
    CHECK_THROWS_AS(
        load_templates(
            R"({"format_version":1,"frame":"x","templates":[{"name":"dig","waypoints":[[0]]}]})"),
        TemplateParseError);
}

TEST_CASE("load rejects invariant violations") {
    TemplateSet tree = builtin_route_tree();

    SECTION("duplicate name") {
        tree.templates.push_back(tree.templates.front());
        CHECK_THROWS_AS(load_templates(save_templates(tree)), TemplateValidationError);
    }
    SECTION("first waypoint off origin") {
        tree.templates[0].waypoints.front() = {1.0, 0.0};
        try {
            load_templates(save_templates(tree));
            FAIL("expected validation error");
        } catch (const TemplateValidationError& e) {
            REQUIRE(e.violations.size() == 1);
            CHECK(e.violations[0].template_name == tree.templates[0].name);
            CHECK(e.violations[0].rule.find("(0,0)") != std::string::npos);
        }
    }
}

TEST_CASE("validate reports violations as data") {
    TemplateSet tree = builtin_route_tree();
    CHECK(validate(tree).empty());

    SECTION("undersized template") {
        tree.templates[0].waypoints = scale_uniform(tree.templates[0].waypoints, 0.01);
        const auto violations = validate(tree);
        REQUIRE(violations.size() >= 1);
        CHECK(violations[0].template_name == tree.templates[0].name);
        CHECK(violations[0].rule.find("oversizing") != std::string::npos);
    }
    SECTION("NaN waypoint") {
        tree.templates[2].waypoints.back().y = std::nan("");
        const auto violations = validate(tree);
        REQUIRE(violations.size() == 1);
        CHECK(violations[0].rule.find("finite") != std::string::npos);
    }
    SECTION("frame mismatch") {
        tree.canonical_frame = "something else";
        CHECK(validate(tree).size() == 1);
    }
    SECTION("empty set") {
        CHECK(validate(TemplateSet{{}, kCanonicalFrame}).size() == 1);
    }
}

TEST_CASE("builtin templates always scale down onto realistic routes") {
    // any route fitting in the 53.3-yard field width and a 60-yard sprint
    // leaves every nonzero template extent dominating, so the scale factor
    // never exceeds 1
    const TemplateSet tree = builtin_route_tree();
    std::mt19937 rng(61);
    std::uniform_real_distribution<double> width(0.0, 53.3);
    std::uniform_real_distribution<double> height(0.1, 60.0);
    for (int trial = 0; trial < 200; ++trial) {
        const double w = trial % 7 == 0 ? 0.0 : width(rng);
        const double h = height(rng);
        const Polyline game{{0, 0}, {w / 2, h / 2}, {w, h}};
        for (const Template& tpl : tree.templates) {
            const BoundingBox tbox = bounding_box(tpl.waypoints);
            const ScaledTemplate scaled = scale_template(tpl, game);
            CHECK(scaled.scale_factor <= 1.0);
            if (w > 0.0 && tbox.width() > 0.0)
                CHECK(tbox.width() / w >= 1.0);
            if (h > 0.0 && tbox.height() > 0.0)
                CHECK(tbox.height() / h >= 1.0);
        }
    }
}
