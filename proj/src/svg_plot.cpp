#include "tverify/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace tverify {

namespace {

constexpr int kWidth = 960;
constexpr int kPanelHeight = 300;
constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kPanelGap = 50;
constexpr const char* kColors[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728"};

struct Range {
    double lo = 0.0, hi = 1.0;
    void widen(double v) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

void render_panel(std::string& out, const std::vector<PlotSeries>& series, bool use_x, int top,
                  const std::string& ylabel) {
    Range tr, vr;
    bool first = true;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.data.times.size(); ++i) {
            const double v = use_x ? s.data.states[i].x : s.data.states[i].z;
            if (first) {
                tr = {s.data.times[i], s.data.times[i]};
                vr = {v, v};
                first = false;
            } else {
                tr.widen(s.data.times[i]);
                vr.widen(v);
            }
        }
    }
    if (tr.hi <= tr.lo) tr.hi = tr.lo + 1.0;
    if (vr.hi <= vr.lo) vr.hi = vr.lo + 1.0;
    const double pad = 0.05 * (vr.hi - vr.lo);
    vr.lo -= pad;
    vr.hi += pad;

    const int plot_w = kWidth - kMarginLeft - kMarginRight;
    const int plot_h = kPanelHeight - 40;
    const auto px = [&](double t) {
        return kMarginLeft + (t - tr.lo) / (tr.hi - tr.lo) * plot_w;
    };
    const auto py = [&](double v) {
        return top + plot_h - (v - vr.lo) / (vr.hi - vr.lo) * plot_h;
    };

    out += "<rect x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(top) +
           "\" width=\"" + std::to_string(plot_w) + "\" height=\"" + std::to_string(plot_h) +
           "\" fill=\"none\" stroke=\"#444\"/>\n";
    // zero line when it lies inside the range
    if (vr.lo < 0.0 && vr.hi > 0.0) {
        out += "<line x1=\"" + std::to_string(kMarginLeft) + "\" y1=\"" + fmt(py(0.0)) + "\" x2=\"" +
               std::to_string(kMarginLeft + plot_w) + "\" y2=\"" + fmt(py(0.0)) +
               "\" stroke=\"#ccc\" stroke-dasharray=\"4 4\"/>\n";
    }
    for (std::size_t k = 0; k < series.size(); ++k) {
        out += "<polyline fill=\"none\" stroke=\"";
        out += kColors[k % 4];
        out += "\" stroke-width=\"1.2\" points=\"";
        const auto& s = series[k];
        for (std::size_t i = 0; i < s.data.times.size(); ++i) {
            const double v = use_x ? s.data.states[i].x : s.data.states[i].z;
            out += fmt(px(s.data.times[i]));
            out += ',';
            out += fmt(py(v));
            out += ' ';
        }
        out += "\"/>\n";
    }
    // axis labels: min/max of both axes plus the series name
    out += "<text x=\"" + std::to_string(kMarginLeft - 8) + "\" y=\"" + std::to_string(top + 12) +
           "\" font-size=\"12\" text-anchor=\"end\">" + fmt(vr.hi) + "</text>\n";
    out += "<text x=\"" + std::to_string(kMarginLeft - 8) + "\" y=\"" + std::to_string(top + plot_h) +
           "\" font-size=\"12\" text-anchor=\"end\">" + fmt(vr.lo) + "</text>\n";
    out += "<text x=\"" + std::to_string(kMarginLeft) + "\" y=\"" + std::to_string(top + plot_h + 18) +
           "\" font-size=\"12\">t=" + fmt(tr.lo) + "</text>\n";
    out += "<text x=\"" + std::to_string(kMarginLeft + plot_w) + "\" y=\"" +
           std::to_string(top + plot_h + 18) + "\" font-size=\"12\" text-anchor=\"end\">t=" + fmt(tr.hi) +
           "</text>\n";
    out += "<text x=\"18\" y=\"" + std::to_string(top + plot_h / 2) +
           "\" font-size=\"14\" transform=\"rotate(-90 18 " + std::to_string(top + plot_h / 2) + ")\">" +
           ylabel + "</text>\n";
}

} // namespace

std::string render_xz_svg(const std::vector<PlotSeries>& series, const std::string& title) {
    if (series.empty()) throw DomainError("render_xz_svg: no series");
    const int height = kMarginTop + 2 * kPanelHeight + kPanelGap;
    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(kWidth) +
           "\" height=\"" + std::to_string(height) + "\" viewBox=\"0 0 " + std::to_string(kWidth) + " " +
           std::to_string(height) + "\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + std::to_string(kWidth / 2) +
           "\" y=\"24\" font-size=\"16\" text-anchor=\"middle\">" + title + "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const int x = kMarginLeft + static_cast<int>(k) * 260;
        out += "<line x1=\"" + std::to_string(x) + "\" y1=\"32\" x2=\"" + std::to_string(x + 24) +
               "\" y2=\"32\" stroke=\"" + kColors[k % 4] + "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + std::to_string(x + 30) + "\" y=\"36\" font-size=\"12\">" +
               series[k].label + "</text>\n";
    }
    render_panel(out, series, /*use_x=*/true, kMarginTop + 10, "x(t)");
    render_panel(out, series, /*use_x=*/false, kMarginTop + kPanelHeight + kPanelGap, "z(t)");
    out += "</svg>\n";
    return out;
}

} // namespace tverify
