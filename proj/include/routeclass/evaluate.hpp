#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "routeclass/route_tree.hpp"
#include "routeclass/tracking.hpp"

namespace routeclass {

struct LabeledPair {
    RouteId id;
    std::string predicted;
    std::string reference;
};

struct LabelScore {
    double precision = 0.0;  // 0 when undefined, see the flag
    double recall = 0.0;
    bool precision_defined = false;
    bool recall_defined = false;
    std::size_t count = 0;  // reference occurrences
    std::size_t tp = 0, fp = 0, fn = 0;

    friend bool operator==(const LabelScore&, const LabelScore&) = default;
};

/// Scores for one prediction run. Accuracy covers every pair, including
/// blocking/bubble; the per-label table leaves blocking/bubble out. The
/// confusion matrix is row-normalized with reference labels as rows, in
/// alphabetical order.
struct EvalReport {
    std::map<std::string, LabelScore> per_label;
    std::vector<std::string> confusion_labels;
    std::vector<std::vector<std::size_t>> confusion_counts;
    std::vector<std::vector<double>> confusion;  // rows sum to 1 when nonempty
    double overall_precision = 0.0;  // micro average over the per-label table
    double overall_recall = 0.0;
    double macro_precision = 0.0;  // mean over labels with defined scores
    double macro_recall = 0.0;
    double accuracy = 0.0;
    std::size_t total = 0;

    friend bool operator==(const EvalReport&, const EvalReport&) = default;
};

/// Row-normalized confusion matrix over whatever labels appear in pairs.
inline void confusion(const std::vector<LabeledPair>& pairs,
                      std::vector<std::string>& labels,
                      std::vector<std::vector<std::size_t>>& counts,
                      std::vector<std::vector<double>>& normalized) {
    if (pairs.empty())
        throw std::invalid_argument("confusion of an empty pair list");
    std::set<std::string> label_set;
    for (const auto& p : pairs) {
        label_set.insert(p.predicted);
        label_set.insert(p.reference);
    }
    labels.assign(label_set.begin(), label_set.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < labels.size(); ++i)
        index[labels[i]] = i;

    counts.assign(labels.size(), std::vector<std::size_t>(labels.size(), 0));
    for (const auto& p : pairs)
        ++counts[index[p.reference]][index[p.predicted]];

    normalized.assign(labels.size(), std::vector<double>(labels.size(), 0.0));
    for (std::size_t r = 0; r < labels.size(); ++r) {
        std::size_t row_total = 0;
        for (std::size_t c = 0; c < labels.size(); ++c)
            row_total += counts[r][c];
        if (row_total == 0)
            continue;
        for (std::size_t c = 0; c < labels.size(); ++c)
            normalized[r][c] =
                static_cast<double>(counts[r][c]) / static_cast<double>(row_total);
    }
}

/// Precision/recall per label plus pooled (micro) overall scores and exact
/// accuracy. Undefined ratios (zero denominator) score 0 and are flagged.
inline EvalReport score(const std::vector<LabeledPair>& pairs) {
    if (pairs.empty())
        throw std::invalid_argument("score of an empty pair list");

    EvalReport report;
    report.total = pairs.size();

    std::size_t correct = 0;
    std::set<std::string> labels;
    for (const auto& p : pairs) {
        if (p.predicted == p.reference)
            ++correct;
        labels.insert(p.predicted);
        labels.insert(p.reference);
    }
    report.accuracy = static_cast<double>(correct) / static_cast<double>(report.total);
    labels.erase(kBlockingLabel);

    std::size_t pool_tp = 0, pool_fp = 0, pool_fn = 0;
    double macro_p = 0.0, macro_r = 0.0;
    std::size_t macro_p_n = 0, macro_r_n = 0;
    for (const std::string& label : labels) {
        LabelScore s;
        for (const auto& p : pairs) {
            const bool pred = p.predicted == label;
            const bool ref = p.reference == label;
            if (pred && ref)
                ++s.tp;
            else if (pred)
                ++s.fp;
            else if (ref)
                ++s.fn;
            if (ref)
                ++s.count;
        }
        if (s.tp + s.fp > 0) {
            s.precision = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fp);
            s.precision_defined = true;
            macro_p += s.precision;
            ++macro_p_n;
        }
        if (s.tp + s.fn > 0) {
            s.recall = static_cast<double>(s.tp) / static_cast<double>(s.tp + s.fn);
            s.recall_defined = true;
            macro_r += s.recall;
            ++macro_r_n;
        }
        pool_tp += s.tp;
        pool_fp += s.fp;
        pool_fn += s.fn;
        report.per_label[label] = s;
    }
    if (pool_tp + pool_fp > 0)
        report.overall_precision =
            static_cast<double>(pool_tp) / static_cast<double>(pool_tp + pool_fp);
    if (pool_tp + pool_fn > 0)
        report.overall_recall =
            static_cast<double>(pool_tp) / static_cast<double>(pool_tp + pool_fn);
    if (macro_p_n > 0)
        report.macro_precision = macro_p / static_cast<double>(macro_p_n);
    if (macro_r_n > 0)
        report.macro_recall = macro_r / static_cast<double>(macro_r_n);

    confusion(pairs, report.confusion_labels, report.confusion_counts, report.confusion);
    return report;
}

// ---------------------------------------------------------------------------
// Rendering

namespace detail {

inline std::string ratio_cell(double value, bool defined) {
    if (!defined)
        return "-";
    std::ostringstream os;
    os << std::fixed << std::setprecision(2) << value;
    return os.str();
}

}  // namespace detail

inline std::string render_text(const EvalReport& report) {
    std::size_t name_width = std::string("Overall").size();
    for (const auto& [label, _] : report.per_label)
        name_width = std::max(name_width, label.size());

    std::ostringstream os;
    os << std::left << std::setw(static_cast<int>(name_width)) << "Route"
       << "  Precision  Recall  Count\n";
    auto row = [&](const std::string& name, const std::string& p, const std::string& r,
                   std::size_t count) {
        os << std::left << std::setw(static_cast<int>(name_width)) << name << "  "
           << std::right << std::setw(9) << p << "  " << std::setw(6) << r << "  "
           << std::setw(5) << count << "\n";
    };
    for (const auto& [label, s] : report.per_label)
        row(label, detail::ratio_cell(s.precision, s.precision_defined),
            detail::ratio_cell(s.recall, s.recall_defined), s.count);
    row("Overall", detail::ratio_cell(report.overall_precision, true),
        detail::ratio_cell(report.overall_recall, true), report.total);
    os << std::fixed << std::setprecision(4) << "Accuracy: " << report.accuracy << " ("
       << report.total << " routes)\n";
    return os.str();
}

inline nlohmann::json report_to_json(const EvalReport& report) {
    nlohmann::json j;
    j["total"] = report.total;
    j["accuracy"] = report.accuracy;
    j["overall"] = {{"precision", report.overall_precision},
                    {"recall", report.overall_recall}};
    j["macro"] = {{"precision", report.macro_precision},
                  {"recall", report.macro_recall}};
    j["per_label"] = nlohmann::json::object();
    for (const auto& [label, s] : report.per_label)
        j["per_label"][label] = {
            {"precision", s.precision},   {"recall", s.recall},
            {"precision_defined", s.precision_defined},
            {"recall_defined", s.recall_defined},
            {"count", s.count},           {"tp", s.tp},
            {"fp", s.fp},                 {"fn", s.fn}};
    j["confusion"] = {{"labels", report.confusion_labels},
                      {"counts", report.confusion_counts},
                      {"normalized", report.confusion}};
    return j;
}

inline EvalReport report_from_json(const nlohmann::json& j) {
    EvalReport report;
    report.total = j.at("total").get<std::size_t>();
    report.accuracy = j.at("accuracy").get<double>();
    report.overall_precision = j.at("overall").at("precision").get<double>();
    report.overall_recall = j.at("overall").at("recall").get<double>();
    report.macro_precision = j.at("macro").at("precision").get<double>();
    report.macro_recall = j.at("macro").at("recall").get<double>();
    for (const auto& [label, js] : j.at("per_label").items()) {
        LabelScore s;
        s.precision = js.at("precision").get<double>();
        s.recall = js.at("recall").get<double>();
        s.precision_defined = js.at("precision_defined").get<bool>();
        s.recall_defined = js.at("recall_defined").get<bool>();
        s.count = js.at("count").get<std::size_t>();
        s.tp = js.at("tp").get<std::size_t>();
        s.fp = js.at("fp").get<std::size_t>();
        s.fn = js.at("fn").get<std::size_t>();
        report.per_label[label] = s;
    }
    report.confusion_labels =
        j.at("confusion").at("labels").get<std::vector<std::string>>();
    report.confusion_counts =
        j.at("confusion").at("counts").get<std::vector<std::vector<std::size_t>>>();
    report.confusion =
        j.at("confusion").at("normalized").get<std::vector<std::vector<double>>>();
    return report;
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

}  // namespace detail

/// Confusion matrix as a shaded SVG grid, reference labels down the side,
/// predicted across the top.
inline std::string render_confusion_svg(const EvalReport& report) {
    const std::size_t n = report.confusion_labels.size();
    const double cell = 46.0;
    const double left = 150.0, top = 110.0;
    const double width = left + cell * static_cast<double>(n) + 20.0;
    const double height = top + cell * static_cast<double>(n) + 20.0;

    std::ostringstream os;
    os << std::fixed << std::setprecision(2);
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
       << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    os << "  <rect width=\"" << width << "\" height=\"" << height
       << "\" fill=\"white\"/>\n";
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            const double v = report.confusion[r][c];
            const double x = left + cell * static_cast<double>(c);
            const double y = top + cell * static_cast<double>(r);
            const int shade = static_cast<int>(std::lround(255.0 * (1.0 - v)));
            os << "  <rect x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
               << "\" height=\"" << cell << "\" fill=\"rgb(" << shade << "," << shade
               << ",255)\" stroke=\"#888\"/>\n";
            if (v > 0.0)
                os << "  <text x=\"" << x + cell / 2 << "\" y=\"" << y + cell / 2 + 4
                   << "\" font-size=\"11\" text-anchor=\"middle\" fill=\""
                   << (v > 0.5 ? "white" : "black") << "\">" << v << "</text>\n";
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::string label = detail::xml_escape(report.confusion_labels[i]);
        os << "  <text x=\"" << left - 8 << "\" y=\""
           << top + cell * static_cast<double>(i) + cell / 2 + 4
           << "\" font-size=\"12\" text-anchor=\"end\">" << label << "</text>\n";
        os << "  <text x=\"" << left + cell * static_cast<double>(i) + cell / 2
           << "\" y=\"" << top - 8 << "\" font-size=\"12\" text-anchor=\"middle\" "
           << "transform=\"rotate(-45 " << left + cell * static_cast<double>(i) + cell / 2
           << " " << top - 8 << ")\">" << label << "</text>\n";
    }
    os << "  <text x=\"14\" y=\"" << top + cell * static_cast<double>(n) / 2
       << "\" font-size=\"13\" transform=\"rotate(-90 14 "
       << top + cell * static_cast<double>(n) / 2 << ")\" text-anchor=\"middle\">"
       << "reference</text>\n";
    os << "  <text x=\"" << left + cell * static_cast<double>(n) / 2
       << "\" y=\"20\" font-size=\"13\" text-anchor=\"middle\">predicted</text>\n";
    os << "</svg>\n";
    return os.str();
}

inline std::string render_report(const EvalReport& report, const std::string& format) {
    if (format == "text")
        return render_text(report);
    if (format == "json")
        return report_to_json(report).dump(2) + "\n";
    if (format == "svg")
        return render_confusion_svg(report);
    throw std::invalid_argument("unknown report format: " + format);
}

// ---------------------------------------------------------------------------
// Prediction / reference joining

struct JoinResult {
    std::vector<LabeledPair> pairs;
    std::vector<RouteId> unmatched_predictions;
    std::vector<RouteId> unmatched_references;
};

inline JoinResult join_labels(const std::vector<std::pair<RouteId, std::string>>& predictions,
                              const std::vector<std::pair<RouteId, std::string>>& references) {
    JoinResult out;
    std::map<RouteId, std::string> ref_map;
    for (const auto& [id, label] : references)
        ref_map[id] = label;

    std::set<RouteId> matched;
    for (const auto& [id, label] : predictions) {
        auto it = ref_map.find(id);
        if (it == ref_map.end()) {
            out.unmatched_predictions.push_back(id);
            continue;
        }
        matched.insert(id);
        out.pairs.push_back({id, label, it->second});
    }
    for (const auto& [id, label] : references)
        if (!matched.count(id))
            out.unmatched_references.push_back(id);
    return out;
}

}  // namespace routeclass
