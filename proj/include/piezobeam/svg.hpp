#pragma once

#include <string>
#include <vector>

namespace piezobeam {

struct PlotSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
};

struct PlotSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
    int width = 640;
    int height = 420;
};

/// Line plot with axes, ticks, labels and a legend. Output depends only on
/// the inputs (fixed-precision coordinates, no timestamps). Non-finite
/// points, and non-positive ones on log axes, are skipped.
std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series);

}  // namespace piezobeam
