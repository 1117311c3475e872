#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "trajkit/io.hpp"

namespace trajkit {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitDegenerateData = 3;

struct EvaluateOptions {
    std::string gt_path;
    std::string est_path;
    FileFormat format = FileFormat::tum;
    AssocMode assoc = AssocMode::index;
    double assoc_tolerance = 0.02;
    std::vector<std::string> metrics;  // empty = all; "stats1"/"stats2" expand
    std::uint64_t seed = 0;
    double alpha = 0.5;
    bool json = false;
    std::string hist_csv_prefix;  // empty = no histogram files
};

struct SimulateOptions {
    std::string grid;  // fig2..fig7c or "custom"
    std::string config_path;  // JSON grid description for custom
    int runs = 50;
    std::uint64_t seed = 0;
    std::string out_dir;
    int threads = 0;  // 0 = hardware concurrency
};

struct ReportOptions {
    std::string in_dir;  // directory holding *_summary.csv files
    bool svg = true;
};

int run_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err);
int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);
int run_report(const ReportOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace trajkit
