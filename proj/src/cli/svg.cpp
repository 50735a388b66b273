#include "spnls/cli/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace spnls::cli {

namespace {

const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b"};

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '<')
            out += "&lt;";
        else if (c == '>')
            out += "&gt;";
        else if (c == '&')
            out += "&amp;";
        else
            out += c;
    }
    return out;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

struct Axis {
    bool log = false;
    double lo = 0.0, hi = 1.0;

    double map(double v) const { return log ? std::log10(v) : v; }
    double unmap(double v) const { return log ? std::pow(10.0, v) : v; }
    double frac(double v) const { return (map(v) - lo) / (hi - lo); }
};

Axis make_axis(const std::vector<Series>& series, bool log, bool use_x) {
    Axis a;
    a.log = log;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& s : series)
        for (double v : use_x ? s.x : s.y) {
            if (!std::isfinite(v) || (log && v <= 0.0)) continue;
            lo = std::min(lo, a.map(v));
            hi = std::max(hi, a.map(v));
        }
    if (!std::isfinite(lo)) lo = 0.0, hi = 1.0;
    if (hi - lo < 1e-12) lo -= 0.5, hi += 0.5;
    double pad = 0.05 * (hi - lo);
    a.lo = lo - pad;
    a.hi = hi + pad;
    return a;
}

}  // namespace

std::string line_plot(const PlotSpec& spec, const std::vector<Series>& series) {
    const double W = 640, H = 420, left = 70, right = 160, top = 40, bottom = 50;
    const double pw = W - left - right, ph = H - top - bottom;
    Axis ax = make_axis(series, spec.logx, true), ay = make_axis(series, spec.logy, false);
    auto X = [&](double v) { return left + pw * ax.frac(v); };
    auto Y = [&](double v) { return top + ph * (1.0 - ay.frac(v)); };

    std::string s = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt(W) + "\" height=\"" + fmt(H) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt(W / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" + esc(spec.title) + "</text>\n";
    s += "<rect x=\"" + fmt(left) + "\" y=\"" + fmt(top) + "\" width=\"" + fmt(pw) + "\" height=\"" + fmt(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 4; ++i) {
        double fx = ax.lo + (ax.hi - ax.lo) * i / 4.0, fy = ay.lo + (ay.hi - ay.lo) * i / 4.0;
        double px = left + pw * i / 4.0, py = top + ph * (1.0 - i / 4.0);
        s += "<text x=\"" + fmt(px) + "\" y=\"" + fmt(top + ph + 18) + "\" text-anchor=\"middle\" font-size=\"11\">" +
             fmt(ax.unmap(fx)) + "</text>\n";
        s += "<text x=\"" + fmt(left - 6) + "\" y=\"" + fmt(py + 4) + "\" text-anchor=\"end\" font-size=\"11\">" +
             fmt(ay.unmap(fy)) + "</text>\n";
    }
    s += "<text x=\"" + fmt(left + pw / 2) + "\" y=\"" + fmt(H - 10) + "\" text-anchor=\"middle\" font-size=\"12\">" +
         esc(spec.xlabel) + "</text>\n";
    s += "<text x=\"16\" y=\"" + fmt(top + ph / 2) + "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 16 " +
         fmt(top + ph / 2) + ")\">" + esc(spec.ylabel) + "</text>\n";
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& se = series[k];
        std::string color = kColors[k % 6];
        std::string pts;
        for (std::size_t i = 0; i < std::min(se.x.size(), se.y.size()); ++i) {
            double x = se.x[i], y = se.y[i];
            if (!std::isfinite(x) || !std::isfinite(y) || (spec.logx && x <= 0) || (spec.logy && y <= 0)) continue;
            pts += fmt(X(x)) + "," + fmt(Y(y)) + " ";
            s += "<circle cx=\"" + fmt(X(x)) + "\" cy=\"" + fmt(Y(y)) + "\" r=\"2.5\" fill=\"" + color + "\"/>\n";
        }
        s += "<polyline fill=\"none\" stroke=\"" + color + "\" points=\"" + pts + "\"/>\n";
        double ly = top + 16 + 18 * k;
        s += "<line x1=\"" + fmt(W - right + 12) + "\" y1=\"" + fmt(ly) + "\" x2=\"" + fmt(W - right + 32) + "\" y2=\"" +
             fmt(ly) + "\" stroke=\"" + color + "\"/>\n";
        s += "<text x=\"" + fmt(W - right + 38) + "\" y=\"" + fmt(ly + 4) + "\" font-size=\"11\">" + esc(se.name) +
             "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

}  // namespace spnls::cli
