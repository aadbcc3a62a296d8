#ifndef MTLAB_SVG_HPP
#define MTLAB_SVG_HPP

#include <string>
#include <utility>
#include <vector>

namespace mtlab {

struct ChartSeries {
    std::string label;
    std::vector<std::pair<double, double>> points;
};

/// Minimal line-chart description rendered to a self-contained SVG document.
struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<ChartSeries> series;
    /// Explicit x tick positions and labels; auto ticks when empty.
    std::vector<std::pair<double, std::string>> x_ticks;
};

std::string render_chart_svg(const ChartSpec& spec);

}  // namespace mtlab

#endif
