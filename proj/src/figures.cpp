#include "sinktrack/figures.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numeric>

namespace sinktrack {

namespace {

constexpr double kWidthPerGroup = 90.0;
constexpr double kPlotHeight = 300.0;
constexpr double kLeft = 60.0;
constexpr double kTop = 30.0;
constexpr double kBottom = 90.0;
constexpr const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728",
                                    "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

std::string escape(const std::string& s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += ch;
        }
    }
    return out;
}

// Index axis is fixed to [0, 1].
double y_of(double index) { return kTop + (1.0 - index) * kPlotHeight; }

std::string label_of(const ResultRow& r, const std::vector<std::string>& keys, std::size_t from) {
    std::string label;
    for (std::size_t i = from; i < keys.size(); ++i) {
        if (!label.empty()) label += ' ';
        label += keys[i] + "=" + column_value(r, keys[i]);
    }
    return label;
}

void open_svg(std::string& svg, double width, double height) {
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(width) + "\" height=\"" + num(height) +
           "\" viewBox=\"0 0 " + num(width) + " " + num(height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void y_axis(std::string& svg, double right) {
    for (int t = 0; t <= 5; ++t) {
        const double v = t / 5.0;
        const double y = y_of(v);
        svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y) + "\" x2=\"" + num(right) + "\" y2=\"" + num(y) +
               "\" stroke=\"#dddddd\"/>\n";
        svg += "<text x=\"" + num(kLeft - 6) + "\" y=\"" + num(y + 4) + "\" text-anchor=\"end\">" + num(v) +
               "</text>\n";
    }
    svg += "<line x1=\"" + num(kLeft) + "\" y1=\"" + num(y_of(1.0)) + "\" x2=\"" + num(kLeft) + "\" y2=\"" +
           num(y_of(0.0)) + "\" stroke=\"black\"/>\n";
    svg += "<text transform=\"translate(16," + num(kTop + kPlotHeight / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">performance index</text>\n";
}

std::string boxplot(const std::vector<ResultRow>& rows, const std::vector<std::string>& keys) {
    // Groups in order of first appearance.
    std::vector<std::string> labels;
    std::map<std::string, std::vector<double>> values;
    for (const auto& r : rows) {
        const auto label = label_of(r, keys, 0);
        if (!values.count(label)) labels.push_back(label);
        values[label].push_back(r.performance_index);
    }

    const double width = kLeft + kWidthPerGroup * static_cast<double>(labels.size()) + 20.0;
    const double height = kTop + kPlotHeight + kBottom;
    std::string svg;
    open_svg(svg, width, height);
    y_axis(svg, width - 20.0);

    for (std::size_t g = 0; g < labels.size(); ++g) {
        const auto s = box_stats(values[labels[g]]);
        const double cx = kLeft + kWidthPerGroup * (static_cast<double>(g) + 0.5);
        const double half = kWidthPerGroup * 0.3;
        const std::string x0 = num(cx - half), x1 = num(cx + half), xc = num(cx);
        svg += "<g class=\"box\" data-group=\"" + escape(labels[g]) + "\">\n";
        svg += "<line x1=\"" + xc + "\" y1=\"" + num(y_of(s.whisker_hi)) + "\" x2=\"" + xc + "\" y2=\"" +
               num(y_of(s.q3)) + "\" stroke=\"black\"/>\n";
        svg += "<line x1=\"" + xc + "\" y1=\"" + num(y_of(s.q1)) + "\" x2=\"" + xc + "\" y2=\"" +
               num(y_of(s.whisker_lo)) + "\" stroke=\"black\"/>\n";
        for (double wv : {s.whisker_lo, s.whisker_hi})
            svg += "<line x1=\"" + num(cx - half / 2) + "\" y1=\"" + num(y_of(wv)) + "\" x2=\"" +
                   num(cx + half / 2) + "\" y2=\"" + num(y_of(wv)) + "\" stroke=\"black\"/>\n";
        svg += "<rect x=\"" + x0 + "\" y=\"" + num(y_of(s.q3)) + "\" width=\"" + num(2 * half) + "\" height=\"" +
               num(y_of(s.q1) - y_of(s.q3)) + "\" fill=\"" + kPalette[g % 8] +
               "\" fill-opacity=\"0.35\" stroke=\"black\"/>\n";
        svg += "<line x1=\"" + x0 + "\" y1=\"" + num(y_of(s.median)) + "\" x2=\"" + x1 + "\" y2=\"" +
               num(y_of(s.median)) + "\" stroke=\"black\" stroke-width=\"2\"/>\n";
        for (double o : s.outliers)
            svg += "<circle cx=\"" + xc + "\" cy=\"" + num(y_of(o)) + "\" r=\"3\" fill=\"none\" stroke=\"black\"/>\n";
        svg += "<text transform=\"translate(" + xc + "," + num(kTop + kPlotHeight + 12) +
               ") rotate(30)\">" + escape(labels[g]) + "</text>\n";
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

std::string lineplot(const std::vector<ResultRow>& rows, const std::vector<std::string>& keys) {
    const std::string& xkey = keys.front();
    // Series label -> x -> (sum, count).
    std::vector<std::string> series;
    std::map<std::string, std::map<double, std::pair<double, int>>> acc;
    for (const auto& r : rows) {
        const std::string xs = column_value(r, xkey);
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(xs, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        require(used == xs.size() && !xs.empty(), "lineplot: column '" + xkey + "' is not numeric");
        std::string label = "method=" + r.method;
        const auto rest = label_of(r, keys, 1);
        if (!rest.empty()) label += ' ' + rest;
        if (!acc.count(label)) series.push_back(label);
        auto& cell = acc[label][x];
        cell.first += r.performance_index;
        cell.second += 1;
    }

    double xmin = INFINITY, xmax = -INFINITY;
    for (const auto& [label, points] : acc)
        for (const auto& [x, cell] : points) {
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
        }
    if (xmax == xmin) {
        xmin -= 0.5;
        xmax += 0.5;
    }

    const double plot_w = 420.0;
    const double width = kLeft + plot_w + 200.0;
    const double height = kTop + kPlotHeight + 50.0;
    const auto x_of = [&](double x) { return kLeft + 10.0 + (x - xmin) / (xmax - xmin) * (plot_w - 20.0); };

    std::string svg;
    open_svg(svg, width, height);
    y_axis(svg, kLeft + plot_w);
    std::vector<double> xticks;
    for (const auto& [label, points] : acc)
        for (const auto& [x, cell] : points) xticks.push_back(x);
    std::sort(xticks.begin(), xticks.end());
    xticks.erase(std::unique(xticks.begin(), xticks.end()), xticks.end());
    for (double x : xticks) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", x);
        svg += "<text x=\"" + num(x_of(x)) + "\" y=\"" + num(kTop + kPlotHeight + 16) +
               "\" text-anchor=\"middle\">" + buf + "</text>\n";
    }
    svg += "<text x=\"" + num(kLeft + plot_w / 2) + "\" y=\"" + num(kTop + kPlotHeight + 36) +
           "\" text-anchor=\"middle\">" + escape(xkey) + "</text>\n";

    for (std::size_t s = 0; s < series.size(); ++s) {
        const char* color = kPalette[s % 8];
        std::string pts;
        svg += "<g class=\"series\" data-series=\"" + escape(series[s]) + "\">\n";
        for (const auto& [x, cell] : acc[series[s]]) {
            const double mean = cell.first / cell.second;
            if (!pts.empty()) pts += ' ';
            pts += num(x_of(x)) + "," + num(y_of(mean));
            svg += "<circle cx=\"" + num(x_of(x)) + "\" cy=\"" + num(y_of(mean)) + "\" r=\"3\" fill=\"" + color +
                   "\"/>\n";
        }
        svg += "<polyline points=\"" + pts + "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"2\"/>\n";
        const double ly = kTop + 14.0 * static_cast<double>(s) + 6.0;
        svg += "<line x1=\"" + num(kLeft + plot_w + 12) + "\" y1=\"" + num(ly) + "\" x2=\"" +
               num(kLeft + plot_w + 32) + "\" y2=\"" + num(ly) + "\" stroke=\"" + color +
               "\" stroke-width=\"2\"/>\n";
        svg += "<text x=\"" + num(kLeft + plot_w + 36) + "\" y=\"" + num(ly + 4) + "\">" + escape(series[s]) +
               "</text>\n";
        svg += "</g>\n";
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace

double quantile_linear(const std::vector<double>& sorted, double p) {
    require(!sorted.empty(), "quantile: empty sample");
    require(p >= 0.0 && p <= 1.0, "quantile: p outside [0, 1]");
    const double h = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    return sorted[lo] + (h - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

BoxStats box_stats(std::vector<double> values) {
    require(!values.empty(), "box_stats: empty sample");
    std::sort(values.begin(), values.end());
    BoxStats s;
    s.q1 = quantile_linear(values, 0.25);
    s.median = quantile_linear(values, 0.5);
    s.q3 = quantile_linear(values, 0.75);
    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr, hi_fence = s.q3 + 1.5 * iqr;
    s.whisker_lo = s.q1;
    s.whisker_hi = s.q3;
    for (double v : values) {
        if (v < lo_fence || v > hi_fence) {
            s.outliers.push_back(v);
            continue;
        }
        s.whisker_lo = std::min(s.whisker_lo, v);
        s.whisker_hi = std::max(s.whisker_hi, v);
    }
    return s;
}

std::string render_figure(const std::vector<ResultRow>& rows, FigureKind kind,
                          const std::vector<std::string>& group_keys) {
    require(!rows.empty(), "figure: no rows");
    require(!group_keys.empty(), "figure: at least one group key is needed");
    for (const auto& key : group_keys) column_value(rows.front(), key); // throws on unknown keys
    return kind == FigureKind::Boxplot ? boxplot(rows, group_keys) : lineplot(rows, group_keys);
}

void emit_figure(const std::vector<ResultRow>& rows, FigureKind kind, const std::vector<std::string>& group_keys,
                 const std::filesystem::path& path) {
    const auto svg = render_figure(rows, kind, group_keys);
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    out << svg;
    if (!out) throw IoError("failed writing " + path.string());
}

} // namespace sinktrack
