#pragma once

#include <string>
#include <vector>

namespace slrt {

struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::vector<double> se;  // error bars drawn at +/- 2 se; may be empty
};

// Standalone single-panel line plot with axes, tick labels, per-point error
// bars and a legend when more than one series is given.
std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<SvgSeries>& series);

}  // namespace slrt
