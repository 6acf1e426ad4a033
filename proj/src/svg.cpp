#include "slrt/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace slrt {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 56.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd"};

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// round-ish tick spacing covering [lo, hi] with about n steps
std::vector<double> ticks(double lo, double hi, int n) {
    const double span = hi - lo;
    const double raw = span / n;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (const double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (mag * m >= raw) {
            step = mag * m;
            break;
        }
    }
    std::vector<double> out;
    const double first = std::ceil(lo / step) * step;
    for (double v = first; v <= hi + 1e-9 * span; v += step) out.push_back(v);
    return out;
}

}  // namespace

std::string render_line_plot(const std::string& title, const std::string& x_label,
                             const std::string& y_label,
                             const std::vector<SvgSeries>& series) {
    if (series.empty()) throw std::invalid_argument("render_line_plot: no series");
    double xmin = 0, xmax = 0, ymin = 0, ymax = 0;
    bool first = true;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size() || (!s.se.empty() && s.se.size() != s.x.size()))
            throw std::invalid_argument("render_line_plot: series length mismatch");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            const double lo = s.y[i] - (s.se.empty() ? 0.0 : 2.0 * s.se[i]);
            const double hi = s.y[i] + (s.se.empty() ? 0.0 : 2.0 * s.se[i]);
            if (first) {
                xmin = xmax = s.x[i];
                ymin = lo;
                ymax = hi;
                first = false;
            } else {
                xmin = std::min(xmin, s.x[i]);
                xmax = std::max(xmax, s.x[i]);
                ymin = std::min(ymin, lo);
                ymax = std::max(ymax, hi);
            }
        }
    }
    if (first) throw std::invalid_argument("render_line_plot: series have no points");
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }
    if (ymax == ymin) {
        ymin -= 0.5;
        ymax += 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    const double plot_w = kWidth - kMarginLeft - kMarginRight;
    const double plot_h = kHeight - kMarginTop - kMarginBottom;
    const auto sx = [&](double v) { return kMarginLeft + (v - xmin) / (xmax - xmin) * plot_w; };
    const auto sy = [&](double v) {
        return kMarginTop + plot_h - (v - ymin) / (ymax - ymin) * plot_h;
    };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
       << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
       << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">"
       << title << "</text>\n";

    // axes
    os << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
       << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
       << "\" stroke=\"black\"/>\n"
       << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
       << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";

    for (const double t : ticks(xmin, xmax, 8)) {
        const double px = sx(t);
        os << "<line x1=\"" << num(px) << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
           << num(px) << "\" y2=\"" << kMarginTop + plot_h + 5 << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << num(px) << "\" y=\"" << kMarginTop + plot_h + 20
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">" << num(t)
           << "</text>\n";
    }
    for (const double t : ticks(ymin, ymax, 6)) {
        const double py = sy(t);
        os << "<line x1=\"" << kMarginLeft - 5 << "\" y1=\"" << num(py) << "\" x2=\""
           << kMarginLeft << "\" y2=\"" << num(py) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << kMarginLeft - 8 << "\" y=\"" << num(py + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">" << num(t)
           << "</text>\n";
    }
    os << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">" << x_label
       << "</text>\n"
       << "<text x=\"18\" y=\"" << kMarginTop + plot_h / 2
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
          "transform=\"rotate(-90 18 "
       << kMarginTop + plot_h / 2 << ")\">" << y_label << "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* color = kPalette[k % 4];
        if (!s.se.empty()) {
            for (std::size_t i = 0; i < s.x.size(); ++i) {
                const double px = sx(s.x[i]);
                const double lo = sy(s.y[i] - 2.0 * s.se[i]);
                const double hi = sy(s.y[i] + 2.0 * s.se[i]);
                os << "<line x1=\"" << num(px) << "\" y1=\"" << num(lo) << "\" x2=\"" << num(px)
                   << "\" y2=\"" << num(hi) << "\" stroke=\"" << color << "\"/>\n"
                   << "<line x1=\"" << num(px - 3) << "\" y1=\"" << num(lo) << "\" x2=\""
                   << num(px + 3) << "\" y2=\"" << num(lo) << "\" stroke=\"" << color << "\"/>\n"
                   << "<line x1=\"" << num(px - 3) << "\" y1=\"" << num(hi) << "\" x2=\""
                   << num(px + 3) << "\" y2=\"" << num(hi) << "\" stroke=\"" << color << "\"/>\n";
            }
        }
        os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (i) os << ' ';
            os << num(sx(s.x[i])) << ',' << num(sy(s.y[i]));
        }
        os << "\"/>\n";
        for (std::size_t i = 0; i < s.x.size(); ++i)
            os << "<circle cx=\"" << num(sx(s.x[i])) << "\" cy=\"" << num(sy(s.y[i]))
               << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
        if (series.size() > 1) {
            const double ly = kMarginTop + 16.0 * static_cast<double>(k);
            os << "<rect x=\"" << kMarginLeft + plot_w - 130 << "\" y=\"" << ly
               << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n"
               << "<text x=\"" << kMarginLeft + plot_w - 112 << "\" y=\"" << ly + 10
               << "\" font-family=\"sans-serif\" font-size=\"12\">" << s.label << "</text>\n";
        }
    }
    os << "</svg>\n";
    return os.str();
}

}  // namespace slrt
