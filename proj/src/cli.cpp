#include "trajkit/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <set>

#include <json.hpp>

#include "trajkit/baselines.hpp"
#include "trajkit/error.hpp"
#include "trajkit/report.hpp"
#include "trajkit/scores.hpp"
#include "trajkit/simlab.hpp"
#include "trajkit/svg.hpp"

namespace trajkit {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

const std::vector<std::string> kAllEvaluateMetrics = {"tas", "ras", "pas",   "ate",  "dte",
                                                      "dre", "maa", "stats1", "stats2"};

std::vector<std::string> expand_metrics(std::vector<std::string> requested) {
    if (requested.empty()) requested = kAllEvaluateMetrics;
    std::vector<std::string> out;
    for (const auto& m : requested) {
        if (m == "stats1") {
            out.insert(out.end(), {"median1", "mean1", "rms1"});
        } else if (m == "stats2") {
            out.insert(out.end(), {"median2", "mean2", "rms2"});
        } else {
            metric_from_name(m);  // validates
            out.push_back(m);
        }
    }
    return out;
}

}  // namespace

int run_evaluate(const EvaluateOptions& opts, std::ostream& out, std::ostream& err) {
    Trajectory gt_all, est_all, gt, est;
    std::vector<std::string> metric_names;
    try {
        metric_names = expand_metrics(opts.metrics);
        gt_all = load_trajectory(opts.gt_path, opts.format);
        est_all = load_trajectory(opts.est_path, opts.format);
        const Association assoc = associate(gt_all, est_all, opts.assoc, opts.assoc_tolerance);
        std::tie(gt, est) = apply_association(gt_all, est_all, assoc);
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerateData;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }

    ScoreReport score_report;
    score_report.alpha = opts.alpha;
    std::map<std::string, double> values;
    std::map<std::string, std::string> unavailable;

    const auto need_rotations = [&]() {
        if (!gt.has_rotations() || !est.has_rotations()) throw Error("rotations unavailable");
    };
    const auto requested = [&](const std::string& name) {
        return std::find(metric_names.begin(), metric_names.end(), name) != metric_names.end();
    };

    // alignment scores
    for (const auto& name : metric_names) {
        try {
            if (name == "tas") {
                TasConfig cfg;
                cfg.registration.seed = opts.seed;
                compute_tas(gt.positions, est.positions, cfg, score_report);
                values[name] = *score_report.tas;
            } else if (name == "ras") {
                need_rotations();
                compute_ras(gt.rotations, est.rotations, RasConfig{}, score_report);
                values[name] = *score_report.ras;
            } else if (name == "pas") {
                if (!score_report.tas) {
                    TasConfig cfg;
                    cfg.registration.seed = opts.seed;
                    compute_tas(gt.positions, est.positions, cfg, score_report);
                }
                if (!score_report.ras) {
                    need_rotations();
                    compute_ras(gt.rotations, est.rotations, RasConfig{}, score_report);
                }
                score_report.pas = pas(*score_report.tas, *score_report.ras, opts.alpha);
                values[name] = *score_report.pas;
            }
        } catch (const Error& e) {
            unavailable[name] = e.what();
        }
    }

    // comparison baselines, computed in one pass
    BaselineSelection sel;
    sel.ate = requested("ate");
    sel.dte = requested("dte");
    sel.dre = requested("dre");
    sel.maa = requested("maa");
    sel.stats_l1 = requested("median1") || requested("mean1") || requested("rms1");
    sel.stats_l2 = requested("median2") || requested("mean2") || requested("rms2");
    const BaselineReport baselines = compute_baselines(gt, est, sel);

    const auto take = [&](const char* name, const std::optional<double>& v, const char* group) {
        if (!requested(name)) return;
        if (v) {
            values[name] = *v;
            return;
        }
        for (const auto& w : baselines.warnings) {
            if (w.rfind(std::string(group) + ": ", 0) == 0)
                unavailable[name] = w.substr(std::string(group).size() + 2);
        }
    };
    take("ate", baselines.ate, "ate");
    take("dte", baselines.dte, "dte");
    take("dre", baselines.dre, "dre");
    take("maa", baselines.maa, "maa");
    const auto take_stats = [&](const std::optional<AngleStats>& s, const char* group,
                                const char* med, const char* mean, const char* rms) {
        take(med, s ? std::optional<double>(s->median) : std::nullopt, group);
        take(mean, s ? std::optional<double>(s->mean) : std::nullopt, group);
        take(rms, s ? std::optional<double>(s->rms) : std::nullopt, group);
    };
    take_stats(baselines.stats_l1, "stats1", "median1", "mean1", "rms1");
    take_stats(baselines.stats_l2, "stats2", "median2", "mean2", "rms2");

    if (!opts.hist_csv_prefix.empty()) {
        std::string prefix = opts.hist_csv_prefix;
        if (prefix.size() > 4 && prefix.substr(prefix.size() - 4) == ".csv")
            prefix = prefix.substr(0, prefix.size() - 4);
        try {
            if (score_report.tas_histogram)
                write_histogram_csv(*score_report.tas_histogram, prefix + "_tas.csv");
            if (score_report.ras_histogram)
                write_histogram_csv(*score_report.ras_histogram, prefix + "_ras.csv");
        } catch (const Error& e) {
            err << "error: " << e.what() << "\n";
            return kExitInputError;
        }
    }

    if (opts.json) {
        nlohmann::json doc;
        doc["seed"] = opts.seed;
        doc["alpha"] = opts.alpha;
        doc["pairs"] = gt.size();
        if (score_report.d) doc["d"] = *score_report.d;
        if (score_report.registration_fallback) doc["registration_fallback"] = true;
        for (const auto& name : metric_names) {
            if (values.count(name)) {
                doc["metrics"][name] = values.at(name);
            } else {
                doc["metrics"][name] = nullptr;
                doc["unavailable"][name] = unavailable.at(name);
            }
        }
        out << doc.dump(2) << "\n";
    } else {
        const auto row = [&](const std::string& name, const std::string& value) {
            out << name;
            for (std::size_t i = name.size(); i < 9; ++i) out << ' ';
            out << ' ' << value << "\n";
        };
        row("seed", std::to_string(opts.seed));
        row("pairs", std::to_string(gt.size()));
        if (score_report.d) row("d", fmt(*score_report.d));
        if (score_report.registration_fallback)
            row("warning", "registration fell back to full-set umeyama");
        for (const auto& name : metric_names) {
            if (values.count(name)) {
                row(name, fmt(values.at(name)));
            } else {
                row(name, "n/a (" + unavailable.at(name) + ")");
            }
        }
    }

    if (values.empty()) {
        err << "error: no requested metric could be computed\n";
        return kExitDegenerateData;
    }
    return kExitOk;
}

namespace {

GridSpec grid_from_json(const std::string& path, int runs, std::uint64_t seed) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("invalid grid config " + path + ": " + e.what());
    }

    const auto axis_from_name = [](const std::string& s) {
        if (s == "outliers") return GridAxis::outliers;
        if (s == "n") return GridAxis::n;
        if (s == "sigma_t") return GridAxis::sigma_t;
        if (s == "sigma_r") return GridAxis::sigma_r;
        if (s == "noise_level") return GridAxis::noise_level;
        throw InputError("unknown axis: " + s);
    };
    const auto kind_from_name = [](const std::string& s) {
        if (s == "random_box") return GeneratorKind::random_box;
        if (s == "collinear") return GeneratorKind::collinear;
        if (s == "varying_n") return GeneratorKind::varying_n;
        if (s == "rotation_only") return GeneratorKind::rotation_only;
        throw InputError("unknown generator kind: " + s);
    };

    try {
        GridSpec g;
        g.name = doc.value("name", std::string("custom"));
        for (const auto& m : doc.at("metrics")) g.metrics.push_back(metric_from_name(m));
        g.x_axis = axis_from_name(doc.value("x_axis", std::string("outliers")));
        g.line_axis = axis_from_name(doc.value("line_axis", std::string("sigma_t")));
        for (const auto& jc : doc.at("cells")) {
            ScenarioConfig c;
            c.kind = kind_from_name(jc.at("kind"));
            c.n = jc.value("n", 100);
            c.sigma_t = jc.value("sigma_t", 0.0);
            c.sigma_r_deg = jc.value("sigma_r", 0.0);
            c.outliers = jc.value("outliers", 0);
            c.runs = runs;
            c.master_seed = seed;
            if (jc.value("volume_rule", std::string("volume_10n")) == "density_10_per")
                c.volume_rule = VolumeRule::density_10_per;
            g.cells.push_back(c);
        }
        if (g.cells.empty()) throw InputError("grid config has no cells");
        return g;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("invalid grid config " + path + ": " + e.what());
    }
}

}  // namespace

int run_simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (opts.runs < 1) throw InputError("--runs must be >= 1");
        if (opts.out_dir.empty()) throw InputError("--out directory required");

        GridSpec grid;
        if (opts.grid == "custom") {
            if (opts.config_path.empty()) throw InputError("--config required for custom grids");
            grid = grid_from_json(opts.config_path, opts.runs, opts.seed);
        } else if (is_builtin_grid(opts.grid)) {
            grid = make_grid(opts.grid, opts.runs, opts.seed);
        } else {
            throw InputError("unknown grid: " + opts.grid);
        }

        std::error_code ec;
        std::filesystem::create_directories(opts.out_dir, ec);
        if (ec) throw InputError("cannot create " + opts.out_dir + ": " + ec.message());

        const auto results = run_grid(grid.cells, grid.metrics, opts.threads);

        const std::string base = opts.out_dir + "/" + grid.name;
        write_runs_csv(grid, results, base + "_runs.csv");
        write_summary_csv(grid, results, base + "_summary.csv");

        std::size_t flagged = 0;
        for (const auto& cell : results) flagged += cell.flags.size();
        out << grid.name << ": " << grid.cells.size() << " cells x " << opts.runs << " runs, "
            << grid.metrics.size() << " metrics";
        if (flagged > 0) out << ", " << flagged << " flagged run-metrics";
        out << "\n";
        out << "wrote " << base << "_runs.csv\n";
        out << "wrote " << base << "_summary.csv\n";
        return kExitOk;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerateData;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

namespace {

// Axes used when plotting a summary; builtin grids use their canonical
// layout, custom grids fall back to a heuristic over the varying columns.
std::pair<GridAxis, GridAxis> plot_axes(const std::string& grid_name,
                                        const std::vector<SummaryRow>& rows) {
    if (is_builtin_grid(grid_name)) {
        const GridSpec g = make_grid(grid_name, 1, 0);
        return {g.x_axis, g.line_axis};
    }
    std::set<int> ns, outs;
    std::set<double> sts, srs;
    for (const auto& r : rows) {
        ns.insert(r.n);
        outs.insert(r.outliers);
        sts.insert(r.sigma_t);
        srs.insert(r.sigma_r);
    }
    GridAxis x = GridAxis::outliers;
    if (ns.size() > 1) {
        x = GridAxis::n;
    } else if (outs.size() > 1) {
        x = GridAxis::outliers;
    } else if (sts.size() > 1) {
        x = GridAxis::sigma_t;
    } else {
        x = GridAxis::sigma_r;
    }
    GridAxis line = GridAxis::sigma_t;
    if (x != GridAxis::sigma_r && srs.size() > 1 && sts.size() > 1) {
        line = GridAxis::sigma_r;
        if (srs.size() == sts.size()) line = GridAxis::noise_level;
    } else if (x != GridAxis::sigma_r && srs.size() > 1) {
        line = GridAxis::sigma_r;
    }
    return {x, line};
}

double row_axis_value(const SummaryRow& r, GridAxis axis) {
    switch (axis) {
        case GridAxis::outliers: return r.outliers;
        case GridAxis::n: return r.n;
        case GridAxis::sigma_t: return r.sigma_t;
        case GridAxis::sigma_r: return r.sigma_r;
        case GridAxis::noise_level: return std::round(r.sigma_t * 100.0);
    }
    return 0.0;
}

std::string line_label(GridAxis axis, double value) {
    char buf[64];
    if (axis == GridAxis::sigma_t) {
        std::snprintf(buf, sizeof(buf), "st=%.3g", value);
    } else if (axis == GridAxis::sigma_r) {
        std::snprintf(buf, sizeof(buf), "sr=%.3g", value);
    } else if (axis == GridAxis::noise_level) {
        std::snprintf(buf, sizeof(buf), "noise %g", value);
    } else {
        std::snprintf(buf, sizeof(buf), "%s=%g", axis_label(axis).c_str(), value);
    }
    return buf;
}

}  // namespace

int run_report(const ReportOptions& opts, std::ostream& out, std::ostream& err) {
    try {
        if (opts.in_dir.empty()) throw InputError("--in directory required");

        std::vector<std::string> summaries;
        std::error_code ec;
        for (const auto& entry : std::filesystem::directory_iterator(opts.in_dir, ec)) {
            const std::string name = entry.path().filename().string();
            if (name.size() > 12 && name.substr(name.size() - 12) == "_summary.csv")
                summaries.push_back(entry.path().string());
        }
        if (ec) throw InputError("cannot read " + opts.in_dir + ": " + ec.message());
        if (summaries.empty()) throw InputError("no *_summary.csv files in " + opts.in_dir);
        std::sort(summaries.begin(), summaries.end());

        int written = 0;
        for (const auto& path : summaries) {
            const auto rows = read_summary_csv(path);
            const std::string grid_name = rows.front().grid;
            const auto [x_axis, line_axis] = plot_axes(grid_name, rows);

            std::vector<std::string> metrics;
            for (const auto& [m, _] : rows.front().metrics) metrics.push_back(m);

            for (const auto& metric : metrics) {
                // line level -> x -> (mean, min, max)
                std::map<double, std::map<double, std::array<double, 3>>> lines;
                for (const auto& r : rows) {
                    lines[row_axis_value(r, line_axis)][row_axis_value(r, x_axis)] =
                        r.metrics.at(metric);
                }
                ChartSpec spec;
                spec.title = grid_name + ": " + metric;
                spec.x_label = axis_label(x_axis);
                spec.y_label = metric;
                for (const auto& [level, pts] : lines) {
                    ChartSeries s;
                    s.label = line_label(line_axis, level);
                    for (const auto& [x, v] : pts) {
                        s.x.push_back(x);
                        s.mean.push_back(v[0]);
                        s.min.push_back(v[1]);
                        s.max.push_back(v[2]);
                    }
                    spec.series.push_back(std::move(s));
                }
                const std::string svg_path =
                    opts.in_dir + "/" + grid_name + "_" + metric + ".svg";
                write_line_chart(spec, svg_path);
                out << "wrote " << svg_path << "\n";
                ++written;
            }
        }
        out << written << " charts\n";
        return kExitOk;
    } catch (const DegenerateError& e) {
        err << "error: " << e.what() << "\n";
        return kExitDegenerateData;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
}

}  // namespace trajkit
