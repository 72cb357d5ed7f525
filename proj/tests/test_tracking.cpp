#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <sstream>

#include "routeclass/synth.hpp"
#include "routeclass/tracking.hpp"

using namespace routeclass;

namespace {

struct Row {
    std::string player;  // empty = ball
    double x = 0.0;
    double y = 0.0;
    int frame = 1;
    std::string event;
    std::string position;
    std::string play = "1";
    std::string dir = "right";
};

std::string fixture_csv(const std::vector<Row>& rows) {
    std::ostringstream os;
    os << "gameId,playId,nflId,x,y,event,playDirection,frame.id,position\n";
    for (const Row& r : rows)
        os << "1," << r.play << "," << r.player << "," << r.x << "," << r.y << ","
           << r.event << "," << r.dir << "," << r.frame << "," << r.position << "\n";
    return os.str();
}

std::vector<TrackingFrame> parse(const std::string& text, ParseReport& report,
                                 const TrackingSchema& schema = {}) {
    std::istringstream in(text);
    return parse_tracking(in, schema, report);
}

// one play: ball + one receiver running straight downfield, snap at frame 1
std::vector<Row> straight_play(int frames, int outcome_frame, const std::string& play = "1") {
    std::vector<Row> rows;
    rows.push_back({"", 30.0, 26.0, 1, "ball_snap", "", play});
    for (int f = 1; f <= frames; ++f) {
        Row r{"88", 30.0 + static_cast<double>(f - 1) * 0.8, 36.0, f, "", "WR", play};
        if (f == 1)
            r.event = "ball_snap";
        else if (f == outcome_frame)
            r.event = "pass_outcome_caught";
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_CASE("parse_tracking basics") {
    ParseReport report;
    const auto frames = parse(fixture_csv({{"11", 10, 20, 1, "ball_snap", "WR"},
                                           {"11", 11, 20, 2, "", "WR"},
                                           {"11", 12, 20, 3, "", "WR"}}),
                              report);
    REQUIRE(frames.size() == 3);
    CHECK(report.rows_total == 3);
    CHECK(report.rows_skipped == 0);
    CHECK(frames[0].player_id == "11");
    CHECK(frames[0].timestamp_ms == 0);
    CHECK(frames[1].timestamp_ms == 100);
    CHECK(frames[0].event == "ball_snap");
    CHECK(frames[2].x == 12.0);
}

TEST_CASE("parse_tracking skips bad rows with line numbers") {
    ParseReport report;
    std::string text = fixture_csv({{"11", 10, 20, 1, "ball_snap", "WR"}});
    text += "1,1,11,abc,20,,right,2,WR\n";
    text += "1,1,11,10.5,20,,right,3,WR\n";
    const auto frames = parse(text, report);
    CHECK(frames.size() == 2);
    CHECK(report.rows_skipped == 1);
    REQUIRE(report.skipped_rows.size() == 1);
    CHECK(report.skipped_rows[0].first == 3);  // 1-based, header is line 1

    SECTION("out-of-field coordinates are also skipped") {
        ParseReport r2;
        std::string bad = fixture_csv({{"11", 10, 20, 1, "ball_snap", "WR"}});
        bad += "1,1,11,130.0,20,,right,2,WR\n";
        CHECK(parse(bad, r2).size() == 1);
        CHECK(r2.rows_skipped == 1);
    }
}

TEST_CASE("parse_tracking schema remapping") {
    std::ostringstream os;
    os << "g,p,who,ex,wy,ev,dir,t,spot\n";
    os << "1,1,11,10,20,ball_snap,right,1,WR\n";
    os << "1,1,11,11,20,,right,2,WR\n";
    TrackingSchema schema;
    schema.game_id = "g";
    schema.play_id = "p";
    schema.player_id = "who";
    schema.x = "ex";
    schema.y = "wy";
    schema.event = "ev";
    schema.play_direction = "dir";
    schema.frame = "t";
    schema.position = "spot";

    ParseReport r1, r2;
    const auto remapped = parse(os.str(), r1, schema);
    const auto standard = parse(fixture_csv({{"11", 10, 20, 1, "ball_snap", "WR"},
                                             {"11", 11, 20, 2, "", "WR"}}),
                                r2);
    REQUIRE(remapped.size() == standard.size());
    for (std::size_t i = 0; i < remapped.size(); ++i) {
        CHECK(remapped[i].player_id == standard[i].player_id);
        CHECK(remapped[i].x == standard[i].x);
        CHECK(remapped[i].timestamp_ms == standard[i].timestamp_ms);
        CHECK(remapped[i].position_code == standard[i].position_code);
    }
}

TEST_CASE("parse_tracking fatal errors") {
    ParseReport report;
    TrackingSchema schema;
    schema.x = "missing_column";
    CHECK_THROWS_AS(parse(fixture_csv({{"11", 10, 20, 1, "", "WR"}}), report, schema),
                    SchemaError);
    CHECK_THROWS_AS(parse("", report), SchemaError);
    CHECK_THROWS_AS(parse("gameId,playId,nflId,x,y,event,playDirection,frame.id\n", report),
                    SchemaError);
}

TEST_CASE("extract_routes clips at the outcome") {
    // outcome at 3.2 s: snap frame plus 32 more
    ParseReport report;
    const auto frames = parse(fixture_csv(straight_play(60, 33)), report);
    const ExtractResult result = extract_routes(frames);
    REQUIRE(result.routes.size() == 1);
    CHECK(result.routes[0].points.size() == 33);
    CHECK(result.routes[0].cutoff_time_s == Catch::Approx(3.2));
    CHECK(result.routes[0].position == "WR");
}

TEST_CASE("extract_routes caps at five seconds") {
    ParseReport report;
    const auto frames = parse(fixture_csv(straight_play(75, 71)), report);
    const ExtractResult result = extract_routes(frames);
    REQUIRE(result.routes.size() == 1);
    CHECK(result.routes[0].points.size() == 51);
    CHECK(result.routes[0].cutoff_time_s == Catch::Approx(5.0));

    SECTION("shorter cutoffs truncate harder") {
        ExtractConfig config;
        config.cutoff_seconds = 3.0;
        const ExtractResult r3 = extract_routes(frames, config);
        REQUIRE(r3.routes.size() == 1);
        CHECK(r3.routes[0].points.size() == 31);
    }
    SECTION("snap frame can be excluded") {
        ExtractConfig config;
        config.include_snap_frame = false;
        const ExtractResult r = extract_routes(frames, config);
        REQUIRE(r.routes.size() == 1);
        CHECK(r.routes[0].points.size() == 50);
        CHECK(r.routes[0].points[0].x == Catch::Approx(30.8));
    }
}

TEST_CASE("extract_routes skips with reasons") {
    SECTION("play without a snap event") {
        auto rows = straight_play(20, 15);
        for (Row& r : rows)
            if (r.event == "ball_snap")
                r.event = "";
        ParseReport report;
        const ExtractResult result = extract_routes(parse(fixture_csv(rows), report));
        CHECK(result.routes.empty());
        REQUIRE(result.skips.size() == 1);
        CHECK(result.skips[0].reason == "no ball_snap event");
    }
    SECTION("play without a ball position at the snap") {
        auto rows = straight_play(20, 15);
        rows.erase(rows.begin());  // drop the ball row
        ParseReport report;
        const ExtractResult result = extract_routes(parse(fixture_csv(rows), report));
        CHECK(result.routes.empty());
        REQUIRE(result.skips.size() == 1);
        CHECK(result.skips[0].reason == "no ball position at snap");
    }
    SECTION("ineligible positions never produce routes") {
        auto rows = straight_play(20, 15);
        for (Row& r : rows)
            if (!r.player.empty())
                r.position = "QB";
        ParseReport report;
        const ExtractResult result = extract_routes(parse(fixture_csv(rows), report));
        CHECK(result.routes.empty());
        CHECK(result.skips.empty());
    }
}

TEST_CASE("backs count only when split out") {
    auto play = [](double back_y) {
        std::vector<Row> rows;
        rows.push_back({"", 30.0, 26.0, 1, "ball_snap", ""});
        for (int f = 1; f <= 20; ++f) {
            Row r{"22", 30.0 + static_cast<double>(f - 1) * 0.6, back_y, f, "", "RB"};
            if (f == 1)
                r.event = "ball_snap";
            else if (f == 20)
                r.event = "pass_outcome_caught";
            rows.push_back(r);
        }
        return rows;
    };
    ParseReport r1, r2;
    const ExtractResult in_backfield = extract_routes(parse(fixture_csv(play(27.0)), r1));
    CHECK(in_backfield.routes.empty());
    REQUIRE(in_backfield.skips.size() == 1);
    CHECK(in_backfield.skips[0].reason == "back not split out");

    const ExtractResult split_out = extract_routes(parse(fixture_csv(play(36.0)), r2));
    CHECK(split_out.routes.size() == 1);
}

TEST_CASE("canonicalize") {
    SECTION("already canonical data only translates") {
        RawRoute raw;
        raw.id = {"g", "p", "r"};
        raw.points = {{2, 3}, {2, 8}, {4, 8}};
        raw.snap_point = {2, 3};
        raw.ball_snap_point = {4, 3};
        raw.direction = PlayDirection::upfield;
        const CanonicalRoute canon = canonicalize(raw);
        CHECK(canon.points == Polyline{{0, 0}, {0, 5}, {2, 5}});
        CHECK(canon.ball_offset == Point{2.0, 0.0});
    }
    SECTION("mirrored line-ups produce identical canonical routes") {
        RawRoute left;
        left.points = {{30, 36}, {35, 38}};
        left.snap_point = {30, 36};
        left.ball_snap_point = {30, 26};
        left.direction = PlayDirection::right;

        RawRoute right = left;
        for (Point& p : right.points)
            p.y = 52.0 - p.y;
        right.snap_point.y = 52.0 - right.snap_point.y;
        right.ball_snap_point.y = 52.0 - right.ball_snap_point.y;

        const CanonicalRoute a = canonicalize(left);
        const CanonicalRoute b = canonicalize(right);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t i = 0; i < a.points.size(); ++i) {
            CHECK(a.points[i].x == Catch::Approx(b.points[i].x).margin(1e-12));
            CHECK(a.points[i].y == Catch::Approx(b.points[i].y).margin(1e-12));
        }
        CHECK(a.points == Polyline{{0, 0}, {-2, 5}});
    }
    SECTION("exactly behind the ball: no mirror") {
        RawRoute raw;
        raw.points = {{10, 26}, {14, 26}};
        raw.snap_point = {10, 26};
        raw.ball_snap_point = {12, 26};
        raw.direction = PlayDirection::right;
        const CanonicalRoute canon = canonicalize(raw);
        CHECK(canon.points == Polyline{{0, 0}, {0, 4}});
        CHECK(canon.ball_offset.y == Catch::Approx(2.0));
    }
    SECTION("idempotent on its own output") {
        RawRoute raw;
        raw.points = {{40, 30}, {44, 31}, {47, 28}};
        raw.snap_point = {40, 30};
        raw.ball_snap_point = {40, 22};
        raw.direction = PlayDirection::left;
        const CanonicalRoute once = canonicalize(raw);

        RawRoute again;
        again.id = once.id;
        again.points = once.points;
        again.snap_point = once.points.front();
        again.ball_snap_point = once.ball_offset;
        again.direction = PlayDirection::upfield;
        const CanonicalRoute twice = canonicalize(again);
        CHECK(twice.points == once.points);
        CHECK(twice.ball_offset == once.ball_offset);
    }
    SECTION("rigid: arc length is preserved") {
        RawRoute raw;
        raw.points = {{40, 30}, {44, 31}, {47, 28}, {50, 33}};
        raw.snap_point = {40, 30};
        raw.ball_snap_point = {40, 22};
        raw.direction = PlayDirection::left;
        CHECK(arc_length(canonicalize(raw).points) ==
              Catch::Approx(arc_length(raw.points)).epsilon(1e-9));
    }
}

TEST_CASE("movement_extent") {
    CanonicalRoute r;
    r.points = {{0, 0}, {0, 0}, {0, 0}};
    CHECK(movement_extent(r) == 0.0);
    r.points = {{0, 0}, {0, 5}, {0, 10}};
    CHECK(movement_extent(r) == Catch::Approx(10.0));
    r.points = {{0, 0}, {3, 0}, {3, 4}};
    CHECK(movement_extent(r) == Catch::Approx(5.0));
}

TEST_CASE("pipeline is symmetric under a global field mirror") {
    // flipping the whole field across its centerline relabels left and right
    // receivers but must leave the canonical routes untouched
    const TemplateSet tree = builtin_route_tree();
    std::vector<CanonicalRoute> sources;
    for (int i = 0; i < 4; ++i) {
        SynthSpec spec;
        spec.template_name = route_labels()[static_cast<std::size_t>(i * 3)];
        spec.target_scale = 12.0;
        spec.noise_sigma = 0.4;
        spec.seed = static_cast<std::uint64_t>(500 + i);
        sources.push_back(generate(spec, tree));
        sources.back().id.play_id = std::to_string(i + 1);
    }
    const std::string csv = synthetic_tracking_csv(sources);

    // mirror every y coordinate about the field centerline
    auto mirror_csv = [](const std::string& text) {
        std::istringstream in(text);
        std::ostringstream out;
        std::string line;
        std::getline(in, line);
        out << line << "\n";
        while (std::getline(in, line)) {
            std::vector<std::string> f;
            std::stringstream ss(line);
            std::string tok;
            while (std::getline(ss, tok, ','))
                f.push_back(tok);
            std::ostringstream y;
            y.precision(17);
            y << 53.3 - std::stod(f[4]);
            f[4] = y.str();
            for (std::size_t i = 0; i < f.size(); ++i)
                out << (i ? "," : "") << f[i];
            out << "\n";
        }
        return out.str();
    };

    ParseReport r1, r2;
    std::istringstream in1(csv), in2(mirror_csv(csv));
    const auto routes1 = extract_routes(parse_tracking(in1, {}, r1)).routes;
    const auto routes2 = extract_routes(parse_tracking(in2, {}, r2)).routes;
    REQUIRE(routes1.size() == routes2.size());
    for (std::size_t i = 0; i < routes1.size(); ++i) {
        const CanonicalRoute a = canonicalize(routes1[i]);
        const CanonicalRoute b = canonicalize(routes2[i]);
        REQUIRE(a.points.size() == b.points.size());
        for (std::size_t j = 0; j < a.points.size(); ++j) {
            CHECK(a.points[j].x == Catch::Approx(b.points[j].x).margin(1e-9));
            CHECK(a.points[j].y == Catch::Approx(b.points[j].y).margin(1e-9));
        }
    }
}

TEST_CASE("synthetic tracking round-trips through ingest") {
    const TemplateSet tree = builtin_route_tree();
    SynthSpec spec;
    spec.template_name = "post";
    spec.target_scale = 15.0;
    spec.noise_sigma = 0.3;
    spec.seed = 7;
    CanonicalRoute source = generate(spec, tree);
    source.id.play_id = "1";

    ParseReport report;
    std::istringstream in(synthetic_tracking_csv({source}));
    const ExtractResult extracted = extract_routes(parse_tracking(in, {}, report));
    REQUIRE(extracted.routes.size() == 1);
    const CanonicalRoute back = canonicalize(extracted.routes[0]);
    REQUIRE(back.points.size() == source.points.size());
    for (std::size_t i = 0; i < back.points.size(); ++i) {
        CHECK(back.points[i].x == Catch::Approx(source.points[i].x).margin(1e-9));
        CHECK(back.points[i].y == Catch::Approx(source.points[i].y).margin(1e-9));
    }
}

TEST_CASE("players join file supplies positions") {
    std::vector<Row> rows = straight_play(20, 15);
    for (Row& r : rows)
        r.position.clear();
    std::ostringstream csv;
    csv << "nflId,PositionAbbr\n88,WR\n11,QB\n";

    std::istringstream players_in(csv.str());
    const auto positions = parse_players(players_in, {});
    CHECK(positions.at("88") == "WR");

    ParseReport report;
    const ExtractResult result = extract_routes(parse(fixture_csv(rows), report), {}, positions);
    REQUIRE(result.routes.size() == 1);
    CHECK(result.routes[0].position == "WR");
}
