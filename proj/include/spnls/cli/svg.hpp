#pragma once

#include <string>
#include <vector>

namespace spnls::cli {

struct Series {
    std::string name;
    std::vector<double> x, y;
};

struct PlotSpec {
    std::string title;
    std::string xlabel;
    std::string ylabel;
    bool logx = false;
    bool logy = false;
};

// Standalone SVG line chart with markers and a legend.
std::string line_plot(const PlotSpec& spec, const std::vector<Series>& series);

}  // namespace spnls::cli
