#pragma once

// Minimal static SVG line plots (axes, ticks, legend, polylines). Keeps
// the tool free of plotting dependencies; the outputs are simple curves.

#include <string>
#include <vector>

namespace rdlab {

struct PlotSeries {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series);

} // namespace rdlab
