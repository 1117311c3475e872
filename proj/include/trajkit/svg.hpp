#pragma once

#include <string>
#include <vector>

namespace trajkit {

// One chart line: mean polyline plus a shaded min-max band.
struct ChartSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> mean;
    std::vector<double> min;
    std::vector<double> max;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    std::vector<ChartSeries> series;
    int width = 640;
    int height = 420;
};

/// Renders a line chart (axes, ticks, legend, one polyline + band per
/// series) as a standalone SVG document. No plotting dependency.
std::string render_line_chart(const ChartSpec& spec);

void write_line_chart(const ChartSpec& spec, const std::string& path);

}  // namespace trajkit
