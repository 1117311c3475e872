#pragma once

#include <string>
#include <vector>

#include "trajkit/scores.hpp"
#include "trajkit/simlab.hpp"

namespace trajkit {

/// Per-run CSV: one row per (cell, run), scenario columns first, then one
/// column per metric. Failed metrics are written as "n/a".
void write_runs_csv(const GridSpec& grid, const std::vector<CellResult>& results,
                    const std::string& path);

/// Summary CSV: one row per cell with mean/min/max columns per metric.
void write_summary_csv(const GridSpec& grid, const std::vector<CellResult>& results,
                       const std::string& path);

/// Cumulative histogram CSV: threshold, cumulative_count, cumulative_fraction.
void write_histogram_csv(const CumulativeHistogram& hist, const std::string& path);

// Parsed back form of a summary CSV row, enough to draw the charts.
struct SummaryRow {
    std::string grid;
    std::string kind;
    int n = 0;
    double sigma_t = 0.0;
    double sigma_r = 0.0;
    int outliers = 0;
    int runs = 0;
    // metric -> (mean, min, max); NaN when the metric was n/a
    std::map<std::string, std::array<double, 3>> metrics;
};

std::vector<SummaryRow> read_summary_csv(const std::string& path);

}  // namespace trajkit
