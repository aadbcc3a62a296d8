#include "mtlab/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace mtlab {

namespace {

constexpr double WIDTH = 640.0;
constexpr double HEIGHT = 440.0;
constexpr double MARGIN_LEFT = 70.0;
constexpr double MARGIN_RIGHT = 120.0;
constexpr double MARGIN_TOP = 46.0;
constexpr double MARGIN_BOTTOM = 58.0;

const char* PALETTE[] = {"#1f6fb4", "#d1495b", "#2e8b57", "#8a5ab8", "#c98a1c", "#4d4d4d"};

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string escape_text(const std::string& text) {
    std::string out;
    for (char ch : text) {
        switch (ch) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += ch;
        }
    }
    return out;
}

}  // namespace

std::string render_chart_svg(const ChartSpec& spec) {
    double x_min = 0.0, x_max = 1.0, y_max = 1.0;
    bool any = false;
    auto tx = [&spec](double x) { return spec.log_x ? std::log(x) : x; };
    for (const auto& s : spec.series) {
        for (const auto& [x, y] : s.points) {
            if (spec.log_x && !(x > 0.0)) {
                throw std::invalid_argument("log-scaled chart requires positive x values");
            }
            const double xv = tx(x);
            if (!any) {
                x_min = x_max = xv;
                y_max = y;
                any = true;
            } else {
                x_min = std::min(x_min, xv);
                x_max = std::max(x_max, xv);
                y_max = std::max(y_max, y);
            }
        }
    }
    if (!any) {
        x_min = 0.0;
        x_max = 1.0;
    }
    if (x_max - x_min < 1e-12) {
        x_min -= 0.5;
        x_max += 0.5;
    }
    y_max = y_max > 0.0 ? y_max * 1.15 : 1.0;

    const double plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT;
    const double plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM;
    auto px = [&](double x) { return MARGIN_LEFT + (tx(x) - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) { return MARGIN_TOP + (1.0 - y / y_max) * plot_h; };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << WIDTH << "\" height=\""
        << HEIGHT << "\" viewBox=\"0 0 " << WIDTH << " " << HEIGHT << "\">\n";
    svg << "<rect width=\"" << WIDTH << "\" height=\"" << HEIGHT << "\" fill=\"white\"/>\n";
    svg << "<text x=\"" << WIDTH / 2 << "\" y=\"24\" font-family=\"sans-serif\" font-size=\"15\""
        << " text-anchor=\"middle\">" << escape_text(spec.title) << "</text>\n";

    // axes
    const double x0 = MARGIN_LEFT, x1 = MARGIN_LEFT + plot_w;
    const double y0 = MARGIN_TOP + plot_h, y1 = MARGIN_TOP;
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x1 << "\" y2=\"" << y0
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << x0 << "\" y1=\"" << y0 << "\" x2=\"" << x0 << "\" y2=\"" << y1
        << "\" stroke=\"black\"/>\n";

    // y ticks: five divisions
    for (int i = 0; i <= 5; ++i) {
        const double yv = y_max * i / 5.0;
        const double yy = py(yv);
        svg << "<line x1=\"" << x0 - 4 << "\" y1=\"" << yy << "\" x2=\"" << x0 << "\" y2=\""
            << yy << "\" stroke=\"black\"/>\n";
        svg << "<line x1=\"" << x0 << "\" y1=\"" << yy << "\" x2=\"" << x1 << "\" y2=\"" << yy
            << "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
        svg << "<text x=\"" << x0 - 8 << "\" y=\"" << yy + 4
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">" << fmt(yv)
            << "</text>\n";
    }

    // x ticks
    std::vector<std::pair<double, std::string>> ticks = spec.x_ticks;
    if (ticks.empty() && any) {
        for (int i = 0; i <= 5; ++i) {
            const double xv_t = x_min + (x_max - x_min) * i / 5.0;
            const double raw = spec.log_x ? std::exp(xv_t) : xv_t;
            ticks.emplace_back(raw, fmt(raw));
        }
    }
    for (const auto& [pos, label] : ticks) {
        const double xx = px(pos);
        svg << "<line x1=\"" << xx << "\" y1=\"" << y0 << "\" x2=\"" << xx << "\" y2=\""
            << y0 + 4 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << xx << "\" y=\"" << y0 + 18
            << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
            << escape_text(label) << "</text>\n";
    }

    svg << "<text x=\"" << MARGIN_LEFT + plot_w / 2 << "\" y=\"" << HEIGHT - 14
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
        << escape_text(spec.x_label) << "</text>\n";
    svg << "<text x=\"18\" y=\"" << MARGIN_TOP + plot_h / 2
        << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\""
        << " transform=\"rotate(-90 18 " << MARGIN_TOP + plot_h / 2 << ")\">"
        << escape_text(spec.y_label) << "</text>\n";

    // series polylines and legend
    for (std::size_t si = 0; si < spec.series.size(); ++si) {
        const auto& s = spec.series[si];
        const char* color = PALETTE[si % (sizeof(PALETTE) / sizeof(PALETTE[0]))];
        if (!s.points.empty()) {
            svg << "<polyline fill=\"none\" stroke=\"" << color
                << "\" stroke-width=\"1.8\" points=\"";
            for (const auto& [x, y] : s.points) {
                svg << fmt(px(x)) << "," << fmt(py(y)) << " ";
            }
            svg << "\"/>\n";
            for (const auto& [x, y] : s.points) {
                svg << "<circle cx=\"" << fmt(px(x)) << "\" cy=\"" << fmt(py(y))
                    << "\" r=\"2.4\" fill=\"" << color << "\"/>\n";
            }
        }
        const double ly = MARGIN_TOP + 14.0 + 18.0 * static_cast<double>(si);
        const double lx = WIDTH - MARGIN_RIGHT + 14.0;
        svg << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 22
            << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"1.8\"/>\n";
        svg << "<text x=\"" << lx + 28 << "\" y=\"" << ly
            << "\" font-family=\"sans-serif\" font-size=\"11\">" << escape_text(s.label)
            << "</text>\n";
    }

    svg << "</svg>\n";
    return svg.str();
}

}  // namespace mtlab
