#include "rdlab/svg.hpp"

#include "rdlab/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

namespace rdlab {
namespace {

constexpr double kWidth = 800.0, kHeight = 480.0;
constexpr double kLeft = 70.0, kRight = 30.0, kTop = 40.0, kBottom = 55.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

} // namespace

void write_svg_plot(const std::string& path, const std::string& title,
                    const std::string& x_label, const std::string& y_label,
                    const std::vector<PlotSeries>& series) {
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            xmin = std::min(xmin, s.x[i]);
            xmax = std::max(xmax, s.x[i]);
            ymin = std::min(ymin, s.y[i]);
            ymax = std::max(ymax, s.y[i]);
        }
    if (!(xmax > xmin)) { xmin -= 0.5; xmax += 0.5; }
    if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double pw = kWidth - kLeft - kRight;
    const double ph = kHeight - kTop - kBottom;
    const auto px = [&](double x) { return kLeft + (x - xmin) / (xmax - xmin) * pw; };
    const auto py = [&](double y) { return kTop + (ymax - y) / (ymax - ymin) * ph; };

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write plot: " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
        << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << " "
        << kHeight << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"16\">" << title << "</text>\n";

    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << pw
        << "\" height=\"" << ph << "\" fill=\"none\" stroke=\"#333\"/>\n";

    const int ticks = 5;
    for (int i = 0; i <= ticks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / ticks;
        const double fy = ymin + (ymax - ymin) * i / ticks;
        out << "<line x1=\"" << px(fx) << "\" y1=\"" << kTop + ph << "\" x2=\""
            << px(fx) << "\" y2=\"" << kTop + ph + 5 << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << px(fx) << "\" y=\"" << kTop + ph + 20
            << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
               "font-size=\"11\">" << fmt(fx) << "</text>\n";
        out << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << py(fy) << "\" x2=\""
            << kLeft << "\" y2=\"" << py(fy) << "\" stroke=\"#333\"/>\n";
        out << "<text x=\"" << kLeft - 8 << "\" y=\"" << py(fy) + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
               "font-size=\"11\">" << fmt(fy) << "</text>\n";
    }
    out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kHeight - 12
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\">"
        << x_label << "</text>\n";
    out << "<text x=\"16\" y=\"" << kTop + ph / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"13\" "
           "transform=\"rotate(-90 16 " << kTop + ph / 2 << ")\">" << y_label
        << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < series[s].x.size(); ++i)
            out << fmt(px(series[s].x[i])) << "," << fmt(py(series[s].y[i])) << " ";
        out << "\"/>\n";
        out << "<text x=\"" << kLeft + pw - 6 << "\" y=\"" << kTop + 16 + 16 * s
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" "
               "fill=\"" << color << "\">" << series[s].name << "</text>\n";
    }
    out << "</svg>\n";
    if (!out) throw IoError("failed writing plot: " + path);
}

} // namespace rdlab
