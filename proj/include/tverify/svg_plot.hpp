#pragma once

#include <string>
#include <vector>

#include "tverify/report_io.hpp"

namespace tverify {

struct PlotSeries {
    std::string label;
    ParsedTrajectory data;
};

// Two stacked panels, x(t) on top and z(t) below, one polyline per input
// trajectory (blue, then orange for the comparison view).
std::string render_xz_svg(const std::vector<PlotSeries>& series, const std::string& title);

} // namespace tverify
