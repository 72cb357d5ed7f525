#pragma once

#include <algorithm>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include "routeclass/geometry.hpp"

namespace routeclass {

/// Small SVG canvas for route plots. Collects polylines and rectangles in
/// yard coordinates, then renders with +y pointing up and an automatic
/// viewport around everything drawn.
class SvgCanvas {
public:
    void add_polyline(const Polyline& p, const std::string& stroke,
                      double stroke_width = 1.5, double opacity = 1.0) {
        polylines_.push_back({p, stroke, stroke_width, opacity});
        grow(bounding_box(p));
    }

    void add_rect(const BoundingBox& box, const std::string& stroke) {
        rects_.push_back({box, stroke});
        grow(box);
    }

    void add_title(const std::string& title) { title_ = title; }

    std::string render(double pixels_per_yard = 12.0) const {
        const double margin = 2.0;  // yards
        const double min_x = bounds_.min_x - margin;
        const double max_x = bounds_.max_x + margin;
        const double min_y = bounds_.min_y - margin;
        const double max_y = bounds_.max_y + margin;
        const double width = (max_x - min_x) * pixels_per_yard;
        const double height = (max_y - min_y) * pixels_per_yard;
        auto px = [&](double x) { return (x - min_x) * pixels_per_yard; };
        auto py = [&](double y) { return (max_y - y) * pixels_per_yard; };

        std::ostringstream os;
        os << std::fixed << std::setprecision(2);
        os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
           << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
           << "\">\n";
        os << "  <rect width=\"" << width << "\" height=\"" << height
           << "\" fill=\"white\"/>\n";
        if (!title_.empty())
            os << "  <text x=\"8\" y=\"16\" font-size=\"13\">" << escape(title_)
               << "</text>\n";
        for (const auto& r : rects_) {
            os << "  <rect x=\"" << px(r.box.min_x) << "\" y=\"" << py(r.box.max_y)
               << "\" width=\"" << r.box.width() * pixels_per_yard << "\" height=\""
               << r.box.height() * pixels_per_yard << "\" fill=\"none\" stroke=\""
               << r.stroke << "\" stroke-dasharray=\"4 3\"/>\n";
        }
        for (const auto& l : polylines_) {
            os << "  <polyline fill=\"none\" stroke=\"" << l.stroke
               << "\" stroke-width=\"" << l.stroke_width << "\" stroke-opacity=\""
               << l.opacity << "\" points=\"";
            for (std::size_t i = 0; i < l.points.size(); ++i) {
                if (i)
                    os << " ";
                os << px(l.points[i].x) << "," << py(l.points[i].y);
            }
            os << "\"/>\n";
        }
        os << "</svg>\n";
        return os.str();
    }

private:
    struct Line {
        Polyline points;
        std::string stroke;
        double stroke_width;
        double opacity;
    };
    struct Rect {
        BoundingBox box;
        std::string stroke;
    };

    static std::string escape(const std::string& s) {
        std::string out;
        for (char c : s) {
            switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
            }
        }
        return out;
    }

    void grow(const BoundingBox& box) {
        if (!used_) {
            bounds_ = box;
            used_ = true;
            return;
        }
        bounds_.min_x = std::min(bounds_.min_x, box.min_x);
        bounds_.min_y = std::min(bounds_.min_y, box.min_y);
        bounds_.max_x = std::max(bounds_.max_x, box.max_x);
        bounds_.max_y = std::max(bounds_.max_y, box.max_y);
    }

    std::vector<Line> polylines_;
    std::vector<Rect> rects_;
    std::string title_;
    BoundingBox bounds_;
    bool used_ = false;
};

}  // namespace routeclass
