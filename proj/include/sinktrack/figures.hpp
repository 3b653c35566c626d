#pragma once

// Standalone SVG summaries of result rows.

#include <filesystem>
#include <string>
#include <vector>

#include "sinktrack/bench.hpp"

namespace sinktrack {

/// Linear interpolation between order statistics: position p·(n−1) in the sorted sample.
double quantile_linear(const std::vector<double>& sorted, double p);

/// Tukey box: quartiles, whiskers at the most extreme points within 1.5·IQR of the box.
struct BoxStats {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double whisker_lo = 0.0;
    double whisker_hi = 0.0;
    std::vector<double> outliers;
};

BoxStats box_stats(std::vector<double> values);

enum class FigureKind { Boxplot, Lineplot };

/// Boxplot: one box of performance_index per distinct combination of `group_keys`.
/// Lineplot: mean performance_index against the first key (numeric), one line
/// per method and remaining-key combination.
std::string render_figure(const std::vector<ResultRow>& rows, FigureKind kind,
                          const std::vector<std::string>& group_keys);

void emit_figure(const std::vector<ResultRow>& rows, FigureKind kind,
                 const std::vector<std::string>& group_keys, const std::filesystem::path& path);

} // namespace sinktrack
