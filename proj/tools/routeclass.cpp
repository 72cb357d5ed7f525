// Command-line frontend: ingest tracking data, classify routes against the
// route tree, score predictions, render plots, and generate synthetic
// corpora. Exit codes: 0 success, 1 runtime failure, 2 usage/config error.

#include <chrono>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "routeclass/classify.hpp"
#include "routeclass/evaluate.hpp"
#include "routeclass/jsonl.hpp"
#include "routeclass/route_tree.hpp"
#include "routeclass/svg.hpp"
#include "routeclass/synth.hpp"
#include "routeclass/tracking.hpp"

namespace {

using namespace routeclass;

constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw UsageError("cannot open file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void spit(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write file: " + path);
    out << content;
}

struct Options {
    bool quiet = false;
    std::uint64_t seed = 0;

    // classify config
    double gamma = 0.5;
    double step_yards = 0.5;
    double blocking_threshold_yards = 4.0;
    bool include_exact_endpoint = false;

    // ingest config
    double cutoff_seconds = 5.0;
    double rb_split_yards = 8.0;
    bool exclude_snap_frame = false;
};

void apply_config_file(Options& opt, const std::string& path) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("config file " + path + ": " + e.what());
    }
    opt.seed = j.value("seed", opt.seed);
    opt.gamma = j.value("gamma", opt.gamma);
    opt.step_yards = j.value("step_yards", opt.step_yards);
    opt.blocking_threshold_yards =
        j.value("blocking_threshold_yards", opt.blocking_threshold_yards);
    opt.include_exact_endpoint =
        j.value("include_exact_endpoint", opt.include_exact_endpoint);
    opt.cutoff_seconds = j.value("cutoff_seconds", opt.cutoff_seconds);
    opt.rb_split_yards = j.value("rb_split_yards", opt.rb_split_yards);
    opt.exclude_snap_frame = j.value("exclude_snap_frame", opt.exclude_snap_frame);
}

ClassifyConfig classify_config(const Options& opt) {
    try {
        return {Gamma{opt.gamma}, opt.step_yards, opt.blocking_threshold_yards,
                opt.include_exact_endpoint};
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
}

TrackingSchema load_schema(const std::string& path, PlayersSchema& players) {
    TrackingSchema schema;
    if (path.empty())
        return schema;
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(slurp(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw UsageError("schema file " + path + ": " + e.what());
    }
    if (j.contains("delimiter")) {
        const std::string d = j["delimiter"].get<std::string>();
        if (d.size() != 1)
            throw UsageError("schema delimiter must be a single character");
        schema.delimiter = d[0];
        players.delimiter = d[0];
    }
    const auto columns = j.value("columns", nlohmann::json::object());
    auto get = [&](const char* key, std::string& into) {
        if (columns.contains(key))
            into = columns[key].is_null() ? "" : columns[key].get<std::string>();
    };
    get("game_id", schema.game_id);
    get("play_id", schema.play_id);
    get("player_id", schema.player_id);
    get("x", schema.x);
    get("y", schema.y);
    get("event", schema.event);
    get("play_direction", schema.play_direction);
    get("frame", schema.frame);
    get("timestamp_ms", schema.timestamp_ms);
    get("position", schema.position);
    if (j.contains("ball_markers"))
        schema.ball_markers = j["ball_markers"].get<std::vector<std::string>>();
    if (j.contains("players")) {
        players.player_id = j["players"].value("player_id", players.player_id);
        players.position = j["players"].value("position", players.position);
    }
    return schema;
}

TemplateSet templates_from(const std::string& path) {
    if (path.empty())
        return builtin_route_tree();
    return load_templates(slurp(path));
}

// ---------------------------------------------------------------------------

int cmd_ingest(const Options& opt, const std::string& input, const std::string& players_path,
               const std::string& schema_path, const std::string& output,
               const std::string& ecdf_path) {
    if (opt.cutoff_seconds <= 0.0)
        throw UsageError("cutoff-seconds must be positive");
    if (opt.cutoff_seconds != 3.0 && opt.cutoff_seconds != 4.0 && opt.cutoff_seconds != 5.0)
        std::cerr << "warning: cutoff " << opt.cutoff_seconds
                  << "s is outside the usual {3, 4, 5}\n";

    PlayersSchema players_schema;
    const TrackingSchema schema = load_schema(schema_path, players_schema);

    std::map<std::string, std::string> positions;
    if (!players_path.empty()) {
        std::ifstream pin(players_path);
        if (!pin)
            throw UsageError("cannot open players file: " + players_path);
        positions = parse_players(pin, players_schema);
    }

    std::ifstream in(input);
    if (!in)
        throw UsageError("cannot open tracking file: " + input);
    ParseReport report;
    const std::vector<TrackingFrame> frames = parse_tracking(in, schema, report);

    ExtractConfig config;
    config.cutoff_seconds = opt.cutoff_seconds;
    config.include_snap_frame = !opt.exclude_snap_frame;
    config.rb_split_yards = opt.rb_split_yards;
    const ExtractResult extracted = extract_routes(frames, config, positions);

    std::vector<CanonicalRoute> routes;
    routes.reserve(extracted.routes.size());
    for (const RawRoute& raw : extracted.routes)
        routes.push_back(canonicalize(raw));

    std::ofstream out(output);
    if (!out)
        throw std::runtime_error("cannot write " + output);
    write_routes(out, routes);

    if (!ecdf_path.empty()) {
        std::vector<double> cutoffs;
        for (const CanonicalRoute& r : routes)
            cutoffs.push_back(r.cutoff_s);
        std::sort(cutoffs.begin(), cutoffs.end());
        std::ostringstream os;
        os << "cutoff_s\n";
        os.precision(17);
        for (double c : cutoffs)
            os << c << "\n";
        spit(ecdf_path, os.str());
    }

    if (!opt.quiet) {
        std::cout << "rows: " << report.rows_total << " parsed, " << report.rows_skipped
                  << " skipped\n";
        for (const auto& [line, reason] : report.skipped_rows)
            std::cerr << "  line " << line << ": " << reason << "\n";
        std::cout << "routes: " << routes.size() << " extracted, " << extracted.skips.size()
                  << " skips\n";
        for (const SkipRecord& s : extracted.skips)
            std::cerr << "  game " << s.game_id << " play " << s.play_id
                      << (s.player_id.empty() ? "" : " player " + s.player_id) << ": "
                      << s.reason << "\n";
    }
    return 0;
}

int cmd_classify(const Options& opt, const std::string& routes_path,
                 const std::string& templates_path, const std::string& output) {
    const ClassifyConfig config = classify_config(opt);
    const TemplateSet set = templates_from(templates_path);

    std::ifstream in(routes_path);
    if (!in)
        throw UsageError("cannot open routes file: " + routes_path);
    const std::vector<CanonicalRoute> routes = read_routes(in);

    const auto t0 = std::chrono::steady_clock::now();
    const BatchResult batch = classify_batch(routes, set, config);
    const auto t1 = std::chrono::steady_clock::now();
    const double secs = std::chrono::duration<double>(t1 - t0).count();

    std::ofstream out(output);
    if (!out)
        throw std::runtime_error("cannot write " + output);
    write_results(out, batch.results);

    for (const BatchError& e : batch.errors)
        std::cerr << "route " << e.id.game_id << "/" << e.id.play_id << "/"
                  << e.id.player_id << ": " << e.message << "\n";
    if (!opt.quiet) {
        std::cout << "classified " << batch.results.size() << " routes in " << std::fixed
                  << std::setprecision(2) << secs << "s ("
                  << (secs > 0.0 ? static_cast<double>(batch.results.size()) / secs : 0.0)
                  << " routes/s), " << batch.errors.size() << " errors\n";
    }
    return 0;
}

int cmd_evaluate(const Options&, const std::string& predictions_path,
                 const std::string& labels_path, const std::string& format,
                 const std::string& output, double accuracy_floor) {
    std::ifstream pin(predictions_path);
    if (!pin)
        throw UsageError("cannot open predictions file: " + predictions_path);
    const std::vector<MatchResult> results = read_results(pin);

    std::ifstream lin(labels_path);
    if (!lin)
        throw UsageError("cannot open labels file: " + labels_path);
    const auto references = read_reference_labels(lin);

    std::vector<std::pair<RouteId, std::string>> predictions;
    predictions.reserve(results.size());
    for (const MatchResult& m : results)
        predictions.emplace_back(m.id, m.label);

    const JoinResult joined = join_labels(predictions, references);
    if (!joined.unmatched_predictions.empty())
        std::cerr << joined.unmatched_predictions.size()
                  << " predictions had no reference label\n";
    if (!joined.unmatched_references.empty())
        std::cerr << joined.unmatched_references.size()
                  << " reference labels had no prediction\n";
    if (joined.pairs.empty())
        throw std::runtime_error("no prediction/reference pairs after the join");

    const EvalReport report = score(joined.pairs);
    const std::string rendered = render_report(report, format);
    if (output.empty())
        std::cout << rendered;
    else
        spit(output, rendered);

    if (accuracy_floor > 0.0 && report.accuracy < accuracy_floor) {
        std::cerr << "accuracy " << report.accuracy << " below floor " << accuracy_floor
                  << "\n";
        return kExitRuntime;
    }
    return 0;
}

int cmd_plot(const Options& opt, const std::string& routes_path, const std::string& output,
             const std::string& game, const std::string& play, const std::string& player,
             bool overlay_best, const std::string& templates_path,
             const std::string& results_path, const std::string& group) {
    std::ifstream in(routes_path);
    if (!in)
        throw UsageError("cannot open routes file: " + routes_path);
    const std::vector<CanonicalRoute> routes = read_routes(in);

    SvgCanvas canvas;
    if (!group.empty()) {
        std::ifstream rin(results_path);
        if (!rin)
            throw UsageError("group plots need --results: " + results_path);
        const std::vector<MatchResult> results = read_results(rin);

        std::vector<Polyline> members;
        for (const MatchResult& m : results) {
            if (m.label != group)
                continue;
            for (const CanonicalRoute& r : routes)
                if (r.id == m.id)
                    members.push_back(translate_to_origin(r.points));
        }
        if (members.empty())
            throw UsageError("no routes labeled '" + group + "'");
        const std::size_t medoid = medoid_index(members);
        for (std::size_t i = 0; i < members.size(); ++i)
            if (i != medoid)
                canvas.add_polyline(members[i], "steelblue", 1.0, 0.45);
        canvas.add_polyline(members[medoid], "magenta", 2.5);
        canvas.add_title(group + " (" + std::to_string(members.size()) + " routes)");
    } else {
        const CanonicalRoute* route = nullptr;
        for (const CanonicalRoute& r : routes)
            if (r.id.game_id == game && r.id.play_id == play && r.id.player_id == player)
                route = &r;
        if (!route)
            throw UsageError("route not found: " + game + "/" + play + "/" + player);

        const Polyline game_points = translate_to_origin(route->points);
        canvas.add_polyline(game_points, "steelblue", 2.0);
        canvas.add_rect(bounding_box(game_points), "steelblue");
        std::string title = game + "/" + play + "/" + player;

        if (overlay_best) {
            const ClassifyConfig config = classify_config(opt);
            const TemplateSet set = templates_from(templates_path);
            const MatchResult m = classify_route(*route, set, config);
            if (!m.blocking) {
                const PreparedTemplate prep =
                    prepare_template(*set.find(m.best_template), game_points, config);
                const Polyline overlay = shifted_polyline(
                    prep.augmented, m.best_shift.axis, m.best_shift.offset);
                canvas.add_polyline(overlay, "crimson", 2.0);
                canvas.add_rect(bounding_box(overlay), "crimson");
                std::ostringstream t;
                t << title << ": " << m.label << " (d=" << std::fixed
                  << std::setprecision(2) << m.best_distance << ")";
                title = t.str();
            } else {
                title += ": " + std::string(kBlockingLabel);
            }
        }
        canvas.add_title(title);
    }
    spit(output, canvas.render());
    return 0;
}

int cmd_synth(const Options& opt, const std::string& spec_path, const std::string& labels_arg,
              std::size_t n_per_label, double sigma, double jitter, double scale_min,
              double scale_max, std::size_t point_count, const std::string& output,
              const std::string& labels_output, const std::string& tracking_output) {
    const TemplateSet tree = builtin_route_tree();
    std::vector<SynthSpec> specs;
    std::size_t n_per_spec = 1;

    if (!spec_path.empty()) {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(slurp(spec_path));
        } catch (const nlohmann::json::parse_error& e) {
            throw UsageError("spec file " + spec_path + ": " + e.what());
        }
        n_per_spec = j.value("n_per_spec", std::size_t{1});
        for (const auto& js : j.value("specs", nlohmann::json::array())) {
            SynthSpec s;
            s.template_name = js.value("template", std::string{});
            s.target_scale = js.value("target_scale", 15.0);
            s.noise_sigma = js.value("noise_sigma", 0.0);
            s.point_count = js.value("point_count", std::size_t{50});
            s.jitter_break = js.value("jitter_break", 0.0);
            s.seed = js.value("seed", std::uint64_t{0});
            specs.push_back(s);
        }
        if (specs.empty())
            throw UsageError("spec file has no specs");
    } else {
        std::vector<std::string> labels;
        if (labels_arg == "all") {
            labels = route_labels();
        } else if (labels_arg == "scored") {
            labels = {"corner", "dig",    "flat",   "out",  "post",
                      "slant",  "sluggo", "streak", "wheel"};
        } else {
            std::stringstream ss(labels_arg);
            std::string tok;
            while (std::getline(ss, tok, ','))
                labels.push_back(tok);
        }
        for (const std::string& label : labels)
            if (!tree.find(label))
                throw UsageError("unknown template label: " + label);

        PortableRng scale_rng(opt.seed);
        std::uint64_t seed = opt.seed;
        for (const std::string& label : labels) {
            for (std::size_t i = 0; i < n_per_label; ++i) {
                SynthSpec s;
                s.template_name = label;
                s.target_scale = scale_rng.uniform(scale_min, scale_max);
                s.noise_sigma = sigma;
                s.jitter_break = jitter;
                s.point_count = point_count;
                s.seed = seed++;
                specs.push_back(s);
            }
        }
    }

    LabeledCorpus corpus;
    try {
        corpus = generate_corpus(specs, n_per_spec, tree);
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }

    std::ofstream out(output);
    if (!out)
        throw std::runtime_error("cannot write " + output);
    write_routes(out, corpus.routes);

    std::ofstream lout(labels_output);
    if (!lout)
        throw std::runtime_error("cannot write " + labels_output);
    write_reference_labels(lout, corpus.labels);

    if (!tracking_output.empty())
        spit(tracking_output, synthetic_tracking_csv(corpus.routes));

    if (!opt.quiet)
        std::cout << "generated " << corpus.routes.size() << " routes\n";
    return 0;
}

int cmd_templates(bool do_validate, const std::string& file, const std::string& output) {
    if (do_validate) {
        const TemplateSet set = parse_template_set(slurp(file));
        const std::vector<Violation> violations = validate(set);
        if (violations.empty()) {
            std::cout << "ok: " << set.templates.size() << " templates\n";
            return 0;
        }
        for (const Violation& v : violations)
            std::cout << (v.template_name.empty() ? "<set>" : v.template_name) << ": "
                      << v.rule << (v.detail.empty() ? "" : " (" + v.detail + ")") << "\n";
        return kExitRuntime;
    }
    spit(output, save_templates(builtin_route_tree()));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;

    // the config file seeds the defaults, so find it before CLI11 runs
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            try {
                apply_config_file(opt, argv[i + 1]);
            } catch (const std::exception& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitUsage;
            }
        }
    }

    CLI::App app{"receiver route classification by route-tree template matching"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file with option defaults");
    app.add_flag("--quiet", opt.quiet, "suppress progress output");
    app.add_option("--seed", opt.seed, "seed for synthetic generation");

    // ingest
    auto* ingest = app.add_subcommand("ingest", "extract canonical routes from tracking data");
    std::string in_input, in_players, in_schema, in_output, in_ecdf;
    ingest->add_option("--input", in_input, "tracking CSV")->required();
    ingest->add_option("--players", in_players, "players join CSV for positions");
    ingest->add_option("--schema", in_schema, "column-mapping JSON");
    ingest->add_option("--output", in_output, "routes JSON-lines out")->required();
    ingest->add_option("--cutoff-seconds", opt.cutoff_seconds, "route cutoff after the snap");
    ingest->add_option("--rb-split-yards", opt.rb_split_yards,
                       "lateral distance from the ball for a back to count as split out");
    ingest->add_flag("--exclude-snap-frame", opt.exclude_snap_frame,
                     "start routes on the frame after the snap");
    ingest->add_option("--emit-cutoff-ecdf", in_ecdf, "write sorted cutoff times CSV");

    // classify
    auto* classify = app.add_subcommand("classify", "label routes against the route tree");
    std::string cl_routes, cl_templates, cl_output;
    classify->add_option("--routes", cl_routes, "routes JSON-lines")->required();
    classify->add_option("--templates", cl_templates, "template JSON (default: builtin)");
    classify->add_option("--output", cl_output, "match results JSON-lines out")->required();
    classify->add_option("--gamma", opt.gamma, "weight on the scaled-route distance, (0,1]");
    classify->add_option("--step-yards", opt.step_yards, "shift grid step");
    classify->add_option("--blocking-threshold-yards", opt.blocking_threshold_yards,
                         "movement at or below this is blocking/bubble");
    classify->add_flag("--include-exact-endpoint", opt.include_exact_endpoint,
                       "add the exact slack w to the shift grid");

    // evaluate
    auto* evaluate = app.add_subcommand("evaluate", "score predictions against references");
    std::string ev_predictions, ev_labels, ev_format = "text", ev_output;
    double ev_floor = 0.0;
    evaluate->add_option("--predictions", ev_predictions, "match results JSON-lines")
        ->required();
    evaluate->add_option("--labels", ev_labels, "reference labels JSON-lines")->required();
    evaluate->add_option("--format", ev_format, "text, json, or svg");
    evaluate->add_option("--output", ev_output, "write the report here instead of stdout");
    evaluate->add_option("--accuracy-floor", ev_floor,
                         "exit nonzero when accuracy falls below this");

    // plot
    auto* plot = app.add_subcommand("plot", "render routes as SVG");
    std::string pl_routes, pl_output, pl_game, pl_play, pl_player, pl_results, pl_group,
        pl_templates;
    bool pl_overlay = false;
    plot->add_option("--routes", pl_routes, "routes JSON-lines")->required();
    plot->add_option("--output", pl_output, "SVG file")->required();
    plot->add_option("--game", pl_game, "route id: game");
    plot->add_option("--play", pl_play, "route id: play");
    plot->add_option("--player", pl_player, "route id: player");
    plot->add_flag("--overlay-best", pl_overlay, "overlay the best-matching template");
    plot->add_option("--templates", pl_templates, "template JSON (default: builtin)");
    plot->add_option("--results", pl_results, "match results (for --group)");
    plot->add_option("--group", pl_group,
                     "overlay all routes with this label; medoid in magenta");

    // synth
    auto* synth = app.add_subcommand("synth", "generate a labeled synthetic corpus");
    std::string sy_spec, sy_labels = "scored", sy_output, sy_labels_output, sy_tracking;
    std::size_t sy_n = 25, sy_count = 50;
    double sy_sigma = 0.5, sy_jitter = 0.1, sy_scale_min = 8.0, sy_scale_max = 30.0;
    synth->add_option("--spec-file", sy_spec, "JSON spec file (overrides the flags)");
    synth->add_option("--labels", sy_labels, "'scored', 'all', or a comma list");
    synth->add_option("--n", sy_n, "routes per label");
    synth->add_option("--sigma", sy_sigma, "per-point Gaussian noise, yards");
    synth->add_option("--jitter", sy_jitter, "break-depth jitter fraction");
    synth->add_option("--scale-min", sy_scale_min, "min bounding-box long axis, yards");
    synth->add_option("--scale-max", sy_scale_max, "max bounding-box long axis, yards");
    synth->add_option("--count", sy_count, "points per route");
    synth->add_option("--output", sy_output, "routes JSON-lines out")->required();
    synth->add_option("--labels-output", sy_labels_output, "reference labels out")->required();
    synth->add_option("--tracking-output", sy_tracking, "also emit a tracking CSV");

    // templates
    auto* templates = app.add_subcommand("templates", "validate or export template files");
    auto* tp_validate = templates->add_subcommand("validate", "check a template file");
    std::string tp_file, tp_output;
    tp_validate->add_option("--file", tp_file, "template JSON")->required();
    auto* tp_export = templates->add_subcommand("export", "write the builtin tree");
    tp_export->add_option("--output", tp_output, "template JSON out")->required();
    templates->require_subcommand(1);

    for (CLI::App* sub : app.get_subcommands({}))
        sub->fallthrough();
    templates->fallthrough();
    tp_validate->fallthrough();
    tp_export->fallthrough();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0)
            return app.exit(e);
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (app.got_subcommand(ingest))
            return cmd_ingest(opt, in_input, in_players, in_schema, in_output, in_ecdf);
        if (app.got_subcommand(classify))
            return cmd_classify(opt, cl_routes, cl_templates, cl_output);
        if (app.got_subcommand(evaluate))
            return cmd_evaluate(opt, ev_predictions, ev_labels, ev_format, ev_output,
                                ev_floor);
        if (app.got_subcommand(plot))
            return cmd_plot(opt, pl_routes, pl_output, pl_game, pl_play, pl_player,
                            pl_overlay, pl_templates, pl_results, pl_group);
        if (app.got_subcommand(synth))
            return cmd_synth(opt, sy_spec, sy_labels, sy_n, sy_sigma, sy_jitter,
                             sy_scale_min, sy_scale_max, sy_count, sy_output,
                             sy_labels_output, sy_tracking);
        if (app.got_subcommand(templates))
            return cmd_templates(templates->got_subcommand(tp_validate), tp_file, tp_output);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SchemaError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TemplateParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const TemplateValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitRuntime;
    }
    return 0;
}
