#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "stripspec/errors.hpp"

namespace stripspec {

/// Tiny SVG emitter with a data-space viewport (y axis flipped).
class SvgFigure {
  public:
    SvgFigure(int width_px = 900, int height_px = 600) : w_(width_px), h_(height_px) {}

    void add_polyline(const std::vector<std::array<double, 2>>& pts, const std::string& color,
                      double width = 1.5) {
        if (pts.size() < 2) return;
        std::ostringstream os;
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"" << width
           << "\" points=\"";
        for (const auto& p : pts) {
            expand(p[0], p[1]);
            os << fmt(p[0]) << "," << fmt(-p[1]) << " ";
        }
        os << "\"/>\n";
        body_ += os.str();
    }

    /// Filled quadrilateral, value mapped through a blue-white-red ramp.
    void add_cell(const std::array<std::array<double, 2>, 4>& quad, double value01) {
        std::ostringstream os;
        os << "<polygon stroke=\"none\" fill=\"" << heat_color(value01) << "\" points=\"";
        for (const auto& p : quad) {
            expand(p[0], p[1]);
            os << fmt(p[0]) << "," << fmt(-p[1]) << " ";
        }
        os << "\"/>\n";
        body_ += os.str();
    }

    void add_text(double x, double y, const std::string& text, double size = 0.05) {
        expand(x, y);
        std::ostringstream os;
        os << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(-y) << "\" font-size=\"" << size
           << "\" font-family=\"sans-serif\">" << text << "</text>\n";
        body_ += os.str();
        text_sizes_.push_back(size);
    }

    void write(const std::string& path) const {
        std::ofstream out(path);
        if (!out.is_open()) throw Error("cannot open " + path);
        double x0 = xmin_, y0 = -ymax_, dx = xmax_ - xmin_, dy = ymax_ - ymin_;
        if (!(dx > 0)) { x0 -= 0.5; dx = 1.0; }
        if (!(dy > 0)) { y0 -= 0.5; dy = 1.0; }
        const double pad = 0.04 * std::max(dx, dy);
        out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w_ << "\" height=\"" << h_
            << "\" viewBox=\"" << fmt(x0 - pad) << " " << fmt(y0 - pad) << " " << fmt(dx + 2 * pad)
            << " " << fmt(dy + 2 * pad) << "\">\n";
        out << body_;
        out << "</svg>\n";
    }

    static std::string heat_color(double t) {
        t = std::clamp(t, 0.0, 1.0);
        const auto lerp = [](double a, double b, double x) { return a + (b - a) * x; };
        double r, g, b;
        if (t < 0.5) {  // blue -> white
            const double x = t * 2.0;
            r = lerp(40, 255, x); g = lerp(60, 255, x); b = lerp(180, 255, x);
        } else {  // white -> red
            const double x = (t - 0.5) * 2.0;
            r = lerp(255, 200, x); g = lerp(255, 30, x); b = lerp(255, 30, x);
        }
        char buf[16];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", int(r), int(g), int(b));
        return buf;
    }

  private:
    static std::string fmt(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.8g", v);
        return buf;
    }
    void expand(double x, double y) {
        xmin_ = std::min(xmin_, x);
        xmax_ = std::max(xmax_, x);
        ymin_ = std::min(ymin_, y);
        ymax_ = std::max(ymax_, y);
    }

    int w_, h_;
    std::string body_;
    std::vector<double> text_sizes_;
    double xmin_ = std::numeric_limits<double>::infinity();
    double xmax_ = -std::numeric_limits<double>::infinity();
    double ymin_ = std::numeric_limits<double>::infinity();
    double ymax_ = -std::numeric_limits<double>::infinity();
};

} // namespace stripspec
