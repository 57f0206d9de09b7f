#pragma once

#include <optional>
#include <string>
#include <vector>

namespace drrs {

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    bool floored = false;   // value was clamped to the log-axis floor
};

struct PlotSeries {
    std::string label;
    std::vector<PlotPoint> points;
};

struct LinePlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_y = false;
    std::optional<double> floor_value;   // annotated when any point is floored
};

// Self-contained vector line plot; one legended polyline per series.
void write_line_svg(const std::string& path, const std::vector<PlotSeries>& series,
                    const LinePlotOptions& options);

struct BarGridOptions {
    std::string title;
    int k = 0;   // alternatives (group count)
    int m = 0;   // bars per group
};

// Per-scenario sample-size bars, one panel per sample path.
void write_bar_grid_svg(const std::string& path,
                        const std::vector<std::vector<double>>& panels,
                        const std::vector<std::string>& panel_titles,
                        const BarGridOptions& options);

}  // namespace drrs
