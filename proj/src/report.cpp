#include "trajkit/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trajkit/error.hpp"

namespace trajkit {

namespace {

std::string fmt(double v) {
    if (std::isnan(v)) return "n/a";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

void scenario_columns(std::ostream& out, const std::string& grid, const ScenarioConfig& c) {
    out << grid << ',' << generator_name(c.kind) << ',' << c.n << ',' << fmt(c.sigma_t) << ','
        << fmt(c.sigma_r_deg) << ',' << c.outliers << ',' << c.runs;
}

}  // namespace

void write_runs_csv(const GridSpec& grid, const std::vector<CellResult>& results,
                    const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);

    out << "grid,kind,n,sigma_t,sigma_r,outliers,runs,run";
    for (Metric m : grid.metrics) out << ',' << metric_name(m);
    out << '\n';

    for (const auto& cell : results) {
        for (int r = 0; r < cell.scenario.runs; ++r) {
            scenario_columns(out, grid.name, cell.scenario);
            out << ',' << r;
            for (Metric m : grid.metrics) out << ',' << fmt(cell.per_run.at(m)[r]);
            out << '\n';
        }
    }
}

void write_summary_csv(const GridSpec& grid, const std::vector<CellResult>& results,
                       const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);

    out << "grid,kind,n,sigma_t,sigma_r,outliers,runs";
    for (Metric m : grid.metrics) {
        const std::string name = metric_name(m);
        out << ',' << name << "_mean," << name << "_min," << name << "_max";
    }
    out << '\n';

    for (const auto& cell : results) {
        scenario_columns(out, grid.name, cell.scenario);
        for (Metric m : grid.metrics) {
            const auto& s = cell.summary.at(m);
            out << ',' << fmt(s.mean) << ',' << fmt(s.min) << ',' << fmt(s.max);
        }
        out << '\n';
    }
}

void write_histogram_csv(const CumulativeHistogram& hist, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << "threshold,cumulative_count,cumulative_fraction\n";
    for (int k = 1; k <= 100; ++k) {
        const int f = hist.cumulative[k - 1];
        out << fmt(hist.threshold(k)) << ',' << f << ','
            << fmt(static_cast<double>(f) / static_cast<double>(hist.total)) << '\n';
    }
}

std::vector<SummaryRow> read_summary_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);

    std::string header;
    if (!std::getline(in, header)) throw InputError("empty summary CSV: " + path);

    std::vector<std::string> columns;
    {
        std::istringstream ss(header);
        std::string tok;
        while (std::getline(ss, tok, ',')) columns.push_back(tok);
    }
    if (columns.size() < 8 || columns[0] != "grid")
        throw InputError("not a summary CSV: " + path);

    const auto parse = [&](const std::string& s) {
        return s == "n/a" ? std::numeric_limits<double>::quiet_NaN() : std::stod(s);
    };

    std::vector<SummaryRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> fields;
        std::istringstream ss(line);
        std::string tok;
        while (std::getline(ss, tok, ',')) fields.push_back(tok);
        if (fields.size() != columns.size())
            throw InputError("summary CSV row has " + std::to_string(fields.size()) +
                             " fields, expected " + std::to_string(columns.size()));

        SummaryRow row;
        row.grid = fields[0];
        row.kind = fields[1];
        row.n = std::stoi(fields[2]);
        row.sigma_t = parse(fields[3]);
        row.sigma_r = parse(fields[4]);
        row.outliers = std::stoi(fields[5]);
        row.runs = std::stoi(fields[6]);
        for (std::size_t c = 7; c + 2 < columns.size(); c += 3) {
            const std::string& mean_col = columns[c];
            if (mean_col.size() < 6 || mean_col.substr(mean_col.size() - 5) != "_mean")
                throw InputError("unexpected summary column: " + mean_col);
            const std::string metric = mean_col.substr(0, mean_col.size() - 5);
            row.metrics[metric] = {parse(fields[c]), parse(fields[c + 1]), parse(fields[c + 2])};
        }
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw InputError("summary CSV has no data rows: " + path);
    return rows;
}

}  // namespace trajkit
