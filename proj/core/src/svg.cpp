#include "drrs/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace drrs {

namespace {

constexpr const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                    "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write plot file: " + path);
    return out;
}

}  // namespace

void write_line_svg(const std::string& path, const std::vector<PlotSeries>& series,
                    const LinePlotOptions& options) {
    if (series.empty()) throw std::invalid_argument("line plot needs at least one series");
    for (const auto& s : series)
        if (s.points.empty()) throw std::invalid_argument("line plot series must be nonempty");

    const double width = 640, height = 420;
    const double left = 70, right = 40, top = 46, bottom = 52;
    const double plot_w = width - left - right;
    const double plot_h = height - top - bottom;

    double x_min = series[0].points[0].x, x_max = x_min;
    double y_min = series[0].points[0].y, y_max = y_min;
    bool any_floored = false;
    for (const auto& s : series)
        for (const auto& p : s.points) {
            x_min = std::min(x_min, p.x);
            x_max = std::max(x_max, p.x);
            y_min = std::min(y_min, p.y);
            y_max = std::max(y_max, p.y);
            any_floored = any_floored || p.floored;
        }
    if (x_max == x_min) {
        x_min -= 1.0;
        x_max += 1.0;
    }
    auto transform_y = [&](double y) { return options.log_y ? std::log10(y) : y; };
    double ty_min = transform_y(y_min), ty_max = transform_y(y_max);
    if (ty_max == ty_min) {
        ty_min -= 1.0;
        ty_max += 1.0;
    }
    const double pad = 0.06 * (ty_max - ty_min);
    ty_min -= pad;
    ty_max += pad;

    auto px = [&](double x) { return left + (x - x_min) / (x_max - x_min) * plot_w; };
    auto py = [&](double y) {
        return top + (ty_max - transform_y(y)) / (ty_max - ty_min) * plot_h;
    };

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">"
        << options.title << "</text>\n";

    // Axes with a handful of ticks.
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";
    out << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"black\"/>\n";
    for (int t = 0; t <= 4; ++t) {
        const double fx = x_min + (x_max - x_min) * t / 4.0;
        out << "<text x=\"" << px(fx) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << fmt(fx) << "</text>\n";
        const double fy = ty_min + (ty_max - ty_min) * t / 4.0;
        const double label = options.log_y ? std::pow(10.0, fy) : fy;
        out << "<text x=\"" << left - 8 << "\" y=\"" << top + plot_h - plot_h * t / 4.0 + 4
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(label) << "</text>\n";
    }
    out << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\" font-size=\"12\">" << options.x_label << "</text>\n";
    out << "<text x=\"18\" y=\"" << top + plot_h / 2
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 18 "
        << top + plot_h / 2 << ")\">" << options.y_label
        << (options.log_y ? " (log scale)" : "") << "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 8];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& p : series[s].points) out << px(p.x) << "," << py(p.y) << " ";
        out << "\"/>\n";
        for (const auto& p : series[s].points)
            out << "<circle cx=\"" << px(p.x) << "\" cy=\"" << py(p.y) << "\" r=\"3\" fill=\""
                << color << "\"/>\n";
        out << "<rect x=\"" << left + plot_w - 150 << "\" y=\"" << top + 8 + 18.0 * s
            << "\" width=\"12\" height=\"12\" fill=\"" << color << "\"/>\n";
        out << "<text x=\"" << left + plot_w - 132 << "\" y=\"" << top + 18 + 18.0 * s
            << "\" font-size=\"12\">" << series[s].label << "</text>\n";
    }
    if (any_floored && options.floor_value) {
        out << "<text x=\"" << left + 4 << "\" y=\"" << top + plot_h - 6
            << "\" font-size=\"11\" fill=\"#555\">zero estimates plotted at floor "
            << fmt(*options.floor_value) << "</text>\n";
    }
    out << "</svg>\n";
}

void write_bar_grid_svg(const std::string& path,
                        const std::vector<std::vector<double>>& panels,
                        const std::vector<std::string>& panel_titles,
                        const BarGridOptions& options) {
    if (panels.empty()) throw std::invalid_argument("bar grid needs at least one panel");
    const int k = options.k, m = options.m;
    for (const auto& panel : panels)
        if (panel.size() != static_cast<std::size_t>(k) * m)
            throw std::invalid_argument("bar grid panel must be k*m values");

    const double panel_w = 620, panel_h = 220;
    const double left = 60, top_title = 40, gap = 30;
    const double width = left + panel_w + 30;
    const double height = top_title + panels.size() * (panel_h + gap);

    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
        << options.title << "</text>\n";

    for (std::size_t p = 0; p < panels.size(); ++p) {
        const double oy = top_title + p * (panel_h + gap);
        double v_max = 1.0;
        for (double v : panels[p]) v_max = std::max(v_max, v);
        out << "<text x=\"" << left << "\" y=\"" << oy + 12 << "\" font-size=\"12\">"
            << (p < panel_titles.size() ? panel_titles[p] : "") << "</text>\n";
        const double base = oy + panel_h;
        out << "<line x1=\"" << left << "\" y1=\"" << base << "\" x2=\"" << left + panel_w
            << "\" y2=\"" << base << "\" stroke=\"black\"/>\n";
        const double group_w = panel_w / k;
        const double bar_w = group_w / (m + 1);
        for (int i = 0; i < k; ++i) {
            for (int j = 0; j < m; ++j) {
                const double v = panels[p][static_cast<std::size_t>(i) * m + j];
                const double h = (panel_h - 26) * v / v_max;
                const double x = left + i * group_w + (j + 0.5) * bar_w;
                out << "<rect x=\"" << x << "\" y=\"" << base - h << "\" width=\"" << bar_w * 0.9
                    << "\" height=\"" << h << "\" fill=\"" << kPalette[j % 8] << "\"/>\n";
            }
            out << "<text x=\"" << left + (i + 0.5) * group_w << "\" y=\"" << base + 14
                << "\" text-anchor=\"middle\" font-size=\"10\">" << (i + 1) << "</text>\n";
        }
        out << "<text x=\"" << left + panel_w / 2 << "\" y=\"" << base + 26
            << "\" text-anchor=\"middle\" font-size=\"11\">alternative (bars: distributions 1.."
            << m << ")</text>\n";
    }
    out << "</svg>\n";
}

}  // namespace drrs
