#include "trajkit/simlab.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <optional>
#include <thread>

#include "trajkit/baselines.hpp"
#include "trajkit/error.hpp"
#include "trajkit/scores.hpp"

namespace trajkit {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string metric_name(Metric m) {
    switch (m) {
        case Metric::tas: return "tas";
        case Metric::ras: return "ras";
        case Metric::pas: return "pas";
        case Metric::ate: return "ate";
        case Metric::dte: return "dte";
        case Metric::dre: return "dre";
        case Metric::maa: return "maa";
        case Metric::median1: return "median1";
        case Metric::mean1: return "mean1";
        case Metric::rms1: return "rms1";
        case Metric::median2: return "median2";
        case Metric::mean2: return "mean2";
        case Metric::rms2: return "rms2";
    }
    return "?";
}

Metric metric_from_name(const std::string& name) {
    for (int i = 0; i <= static_cast<int>(Metric::rms2); ++i) {
        const auto m = static_cast<Metric>(i);
        if (metric_name(m) == name) return m;
    }
    throw InputError("unknown metric: " + name);
}

std::string generator_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::random_box: return "random_box";
        case GeneratorKind::collinear: return "collinear";
        case GeneratorKind::varying_n: return "varying_n";
        case GeneratorKind::rotation_only: return "rotation_only";
    }
    return "?";
}

std::uint64_t ScenarioConfig::cell_id() const {
    const auto q = [](double v) {
        return static_cast<std::uint64_t>(static_cast<std::int64_t>(std::llround(v * 1e9)));
    };
    return Rng::mix(0x7472616a6b697421ull,  // domain tag
                    {static_cast<std::uint64_t>(kind), static_cast<std::uint64_t>(n),
                     static_cast<std::uint64_t>(outliers), q(sigma_t), q(sigma_r_deg),
                     static_cast<std::uint64_t>(volume_rule)});
}

Trajectory gen_random_box(int n, Rng& rng) {
    if (n < 1) throw Error("gen_random_box: n must be >= 1");
    Trajectory t;
    t.positions.reserve(n);
    t.rotations.reserve(n);
    for (int i = 0; i < n; ++i) {
        t.positions.emplace_back(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5),
                                 rng.uniform(-0.5, 0.5));
        t.rotations.push_back(random_rotation(rng));
    }
    return t;
}

Trajectory gen_collinear(int n, Rng& rng) {
    if (n < 2) throw Error("gen_collinear: n must be >= 2");
    Trajectory t;
    t.positions.reserve(n);
    t.rotations.reserve(n);
    for (int i = 0; i < n; ++i) {
        t.positions.emplace_back(static_cast<double>(i), 0.0, 0.0);
        t.rotations.push_back(random_rotation(rng));
    }
    return t;
}

double varying_n_side(int n, VolumeRule rule) {
    const double volume =
        rule == VolumeRule::volume_10n ? 10.0 * n : static_cast<double>(n) / 10.0;
    return std::cbrt(volume);
}

Trajectory gen_varying_n(int n, Rng& rng, VolumeRule rule) {
    if (n < 4) throw Error("gen_varying_n: n must be >= 4");
    const double half = 0.5 * varying_n_side(n, rule);
    Trajectory t;
    t.positions.reserve(n);
    t.rotations.reserve(n);
    for (int i = 0; i < n; ++i) {
        t.positions.emplace_back(rng.uniform(-half, half), rng.uniform(-half, half),
                                 rng.uniform(-half, half));
        t.rotations.push_back(random_rotation(rng));
    }
    return t;
}

Trajectory gen_rotations_only(int n, Rng& rng) {
    if (n < 1) throw Error("gen_rotations_only: n must be >= 1");
    Trajectory t;
    t.rotations.reserve(n);
    for (int i = 0; i < n; ++i) t.rotations.push_back(random_rotation(rng));
    return t;
}

Trajectory perturb_trajectory(const Trajectory& t, double sigma_t, double sigma_r_deg, Rng& rng) {
    if (sigma_t < 0.0 || sigma_r_deg < 0.0) throw Error("perturb_trajectory: negative sigma");
    Trajectory out = t;
    for (auto& p : out.positions) {
        if (sigma_t > 0.0) {
            p.x() += rng.normal(0.0, sigma_t);
            p.y() += rng.normal(0.0, sigma_t);
            p.z() += rng.normal(0.0, sigma_t);
        }
    }
    for (auto& r : out.rotations) r = perturb_rotation(r, sigma_r_deg, rng);
    return out;
}

Trajectory inject_outliers(const Trajectory& t, int count, Rng& rng) {
    const int n = static_cast<int>(t.size());
    if (count > n) throw Error("inject_outliers: count > n");
    Trajectory out = t;
    if (count == 0) return out;

    // Partial Fisher-Yates: first `count` entries are a uniform subset.
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) idx[i] = i;
    for (int i = 0; i < count; ++i) {
        const int j = i + static_cast<int>(rng.uniform_below(static_cast<std::uint64_t>(n - i)));
        std::swap(idx[i], idx[j]);
    }
    for (int i = 0; i < count; ++i) {
        const int k = idx[i];
        if (out.has_positions()) {
            out.positions[k] =
                Vec3(rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0));
        }
        if (out.has_rotations()) out.rotations[k] = random_rotation(rng);
    }
    return out;
}

std::pair<Trajectory, Trajectory> generate_run(const ScenarioConfig& cell, int run) {
    const std::uint64_t run_seed =
        Rng::mix(cell.master_seed, {cell.cell_id(), static_cast<std::uint64_t>(run)});
    Rng rng_gen = Rng::derive(run_seed, {0});
    Rng rng_perturb = Rng::derive(run_seed, {1});
    Rng rng_outliers = Rng::derive(run_seed, {2});

    Trajectory gt;
    switch (cell.kind) {
        case GeneratorKind::random_box: gt = gen_random_box(cell.n, rng_gen); break;
        case GeneratorKind::collinear: gt = gen_collinear(cell.n, rng_gen); break;
        case GeneratorKind::varying_n:
            gt = gen_varying_n(cell.n, rng_gen, cell.volume_rule);
            break;
        case GeneratorKind::rotation_only: gt = gen_rotations_only(cell.n, rng_gen); break;
    }
    Trajectory est = perturb_trajectory(gt, cell.sigma_t, cell.sigma_r_deg, rng_perturb);
    est = inject_outliers(est, cell.outliers, rng_outliers);
    return {std::move(gt), std::move(est)};
}

std::map<Metric, double> evaluate_metrics(const Trajectory& gt, const Trajectory& est,
                                          const std::vector<Metric>& metrics,
                                          std::uint64_t run_seed,
                                          std::vector<std::string>* flags) {
    std::map<Metric, double> out;
    std::optional<double> tas_value, ras_value;
    std::optional<AngleStats> stats1, stats2;

    const auto fail = [&](Metric m, const std::string& why) {
        out[m] = kNaN;
        if (flags) flags->push_back(metric_name(m) + ": " + why);
    };

    const auto get_tas = [&]() {
        if (!tas_value) {
            TasConfig cfg;
            cfg.registration.seed = Rng::mix(run_seed, {3});
            tas_value = tas(gt, est, cfg);
        }
        return *tas_value;
    };
    const auto get_ras = [&]() {
        if (!ras_value) ras_value = ras(gt, est);
        return *ras_value;
    };
    const auto get_stats = [&](AlignNorm norm) {
        auto& cache = norm == AlignNorm::l1 ? stats1 : stats2;
        if (!cache) cache = aligned_angle_stats(gt.rotations, est.rotations, norm);
        return *cache;
    };

    for (Metric m : metrics) {
        try {
            switch (m) {
                case Metric::tas: out[m] = get_tas(); break;
                case Metric::ras: out[m] = get_ras(); break;
                case Metric::pas: out[m] = pas(get_tas(), get_ras()); break;
                case Metric::ate: out[m] = ate(gt, est); break;
                case Metric::dte: out[m] = dte(gt, est); break;
                case Metric::dre:
                    if (!gt.has_rotations() || !est.has_rotations())
                        throw Error("rotations unavailable");
                    out[m] = dre(gt.rotations, est.rotations);
                    break;
                case Metric::maa: out[m] = maa(gt, est); break;
                case Metric::median1: out[m] = get_stats(AlignNorm::l1).median; break;
                case Metric::mean1: out[m] = get_stats(AlignNorm::l1).mean; break;
                case Metric::rms1: out[m] = get_stats(AlignNorm::l1).rms; break;
                case Metric::median2: out[m] = get_stats(AlignNorm::l2).median; break;
                case Metric::mean2: out[m] = get_stats(AlignNorm::l2).mean; break;
                case Metric::rms2: out[m] = get_stats(AlignNorm::l2).rms; break;
            }
        } catch (const Error& e) {
            fail(m, e.what());
        }
    }
    return out;
}

std::vector<CellResult> run_grid(const std::vector<ScenarioConfig>& cells,
                                 const std::vector<Metric>& metrics, int threads) {
    for (const auto& c : cells) {
        if (c.runs < 1) throw Error("run_grid: runs must be >= 1");
        if (c.outliers > c.n) throw Error("run_grid: outliers > n");
        if (c.sigma_t < 0.0 || c.sigma_r_deg < 0.0) throw Error("run_grid: negative sigma");
    }

    std::vector<CellResult> results(cells.size());
    std::vector<std::vector<std::vector<std::string>>> run_flags(cells.size());
    for (std::size_t c = 0; c < cells.size(); ++c) {
        results[c].scenario = cells[c];
        run_flags[c].resize(cells[c].runs);
        for (Metric m : metrics)
            results[c].per_run[m].assign(cells[c].runs, kNaN);
    }

    struct Task {
        std::size_t cell;
        int run;
    };
    std::vector<Task> tasks;
    for (std::size_t c = 0; c < cells.size(); ++c)
        for (int r = 0; r < cells[c].runs; ++r) tasks.push_back({c, r});

    const auto work = [&](std::size_t t) {
        const auto [c, r] = tasks[t];
        const auto& cell = cells[c];
        const std::uint64_t run_seed =
            Rng::mix(cell.master_seed, {cell.cell_id(), static_cast<std::uint64_t>(r)});
        auto [gt, est] = generate_run(cell, r);
        std::vector<std::string> flags;
        const auto values = evaluate_metrics(gt, est, metrics, run_seed, &flags);
        for (const auto& [m, v] : values) results[c].per_run[m][r] = v;
        for (auto& f : flags) run_flags[c][r].push_back("run " + std::to_string(r) + " " + f);
    };

    int nthreads = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(tasks.size())));
    if (nthreads == 1) {
        for (std::size_t t = 0; t < tasks.size(); ++t) work(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int i = 0; i < nthreads; ++i) {
            pool.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < tasks.size(); t = next.fetch_add(1))
                    work(t);
            });
        }
        for (auto& th : pool) th.join();
    }

    for (std::size_t c = 0; c < cells.size(); ++c) {
        for (const auto& [m, values] : results[c].per_run) {
            MetricSummary s;
            s.min = std::numeric_limits<double>::infinity();
            s.max = -std::numeric_limits<double>::infinity();
            double sum = 0.0;
            for (double v : values) {
                if (std::isnan(v)) continue;
                sum += v;
                s.min = std::min(s.min, v);
                s.max = std::max(s.max, v);
                ++s.valid_runs;
            }
            s.mean = s.valid_runs > 0 ? sum / s.valid_runs : kNaN;
            if (s.valid_runs == 0) s.min = s.max = kNaN;
            results[c].summary[m] = s;
        }
        for (const auto& per_run : run_flags[c])
            for (const auto& f : per_run) results[c].flags.push_back(f);
    }
    return results;
}

namespace {

const std::vector<double> kSigmaTGrid = {0.01, 0.02, 0.03, 0.04, 0.05,
                                         0.06, 0.07, 0.08, 0.09, 0.10};
const std::vector<int> kOutlierGrid = {0, 1, 2, 5, 10, 20, 50};
const std::vector<int> kNGrid = {10, 20, 30, 40, 50, 100, 200};
const std::vector<double> kSigmaRGridFine = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
const std::vector<double> kSigmaRGridCoarse = {1, 3, 5, 7, 9};

ScenarioConfig base_cell(GeneratorKind kind, int runs, std::uint64_t seed) {
    ScenarioConfig c;
    c.kind = kind;
    c.runs = runs;
    c.master_seed = seed;
    return c;
}

}  // namespace

bool is_builtin_grid(const std::string& name) {
    return name == "fig2" || name == "fig3" || name == "fig4" || name == "fig5" ||
           name == "fig6" || name == "fig7a" || name == "fig7b" || name == "fig7c";
}

GridSpec make_grid(const std::string& name, int runs, std::uint64_t master_seed) {
    GridSpec g;
    g.name = name;

    if (name == "fig2" || name == "fig3") {
        const auto kind = name == "fig2" ? GeneratorKind::random_box : GeneratorKind::collinear;
        for (int out : kOutlierGrid) {
            for (double st : kSigmaTGrid) {
                auto c = base_cell(kind, runs, master_seed);
                c.sigma_t = st;
                c.sigma_r_deg = 3.0;
                c.outliers = out;
                g.cells.push_back(c);
            }
        }
        g.metrics = {Metric::ate, Metric::dte, Metric::maa, Metric::tas};
        g.x_axis = GridAxis::outliers;
        g.line_axis = GridAxis::sigma_t;
    } else if (name == "fig4") {
        for (int n : kNGrid) {
            for (double st : kSigmaTGrid) {
                auto c = base_cell(GeneratorKind::varying_n, runs, master_seed);
                c.n = n;
                c.sigma_t = st;
                c.sigma_r_deg = 3.0;
                g.cells.push_back(c);
            }
        }
        g.metrics = {Metric::ate, Metric::dte, Metric::maa, Metric::tas};
        g.x_axis = GridAxis::n;
        g.line_axis = GridAxis::sigma_t;
    } else if (name == "fig5") {
        for (int out : kOutlierGrid) {
            for (double sr : kSigmaRGridFine) {
                auto c = base_cell(GeneratorKind::rotation_only, runs, master_seed);
                c.sigma_r_deg = sr;
                c.outliers = out;
                g.cells.push_back(c);
            }
        }
        g.metrics = {Metric::ras,     Metric::dre,   Metric::median1, Metric::mean1,
                     Metric::rms1,    Metric::median2, Metric::mean2, Metric::rms2};
        g.x_axis = GridAxis::outliers;
        g.line_axis = GridAxis::sigma_r;
    } else if (name == "fig6") {
        for (double sr : kSigmaRGridCoarse) {
            for (double st : kSigmaTGrid) {
                auto c = base_cell(GeneratorKind::random_box, runs, master_seed);
                c.sigma_t = st;
                c.sigma_r_deg = sr;
                c.outliers = 10;
                g.cells.push_back(c);
            }
        }
        g.metrics = {Metric::ate, Metric::dte, Metric::maa,
                     Metric::tas, Metric::ras, Metric::pas};
        g.x_axis = GridAxis::sigma_t;
        g.line_axis = GridAxis::sigma_r;
    } else if (name == "fig7a" || name == "fig7c") {
        const auto kind = name == "fig7a" ? GeneratorKind::random_box : GeneratorKind::collinear;
        for (int out : kOutlierGrid) {
            for (int k = 1; k <= 10; ++k) {
                auto c = base_cell(kind, runs, master_seed);
                c.sigma_t = 0.01 * k;
                c.sigma_r_deg = 1.0 * k;
                c.outliers = out;
                g.cells.push_back(c);
            }
        }
        g.metrics = {Metric::maa, Metric::pas, Metric::tas, Metric::ras};
        g.x_axis = GridAxis::outliers;
        g.line_axis = GridAxis::noise_level;
    } else if (name == "fig7b") {
        for (int n : kNGrid) {
            for (int k = 1; k <= 10; ++k) {
                auto c = base_cell(GeneratorKind::varying_n, runs, master_seed);
                c.n = n;
                c.sigma_t = 0.01 * k;
                c.sigma_r_deg = 1.0 * k;
                g.cells.push_back(c);
            }
        }
        g.metrics = {Metric::maa, Metric::pas, Metric::tas, Metric::ras};
        g.x_axis = GridAxis::n;
        g.line_axis = GridAxis::noise_level;
    } else {
        throw InputError("unknown grid: " + name);
    }
    return g;
}

double axis_value(const ScenarioConfig& cell, GridAxis axis) {
    switch (axis) {
        case GridAxis::outliers: return cell.outliers;
        case GridAxis::n: return cell.n;
        case GridAxis::sigma_t: return cell.sigma_t;
        case GridAxis::sigma_r: return cell.sigma_r_deg;
        case GridAxis::noise_level: return std::round(cell.sigma_t * 100.0);
    }
    return 0.0;
}

std::string axis_label(GridAxis axis) {
    switch (axis) {
        case GridAxis::outliers: return "outliers";
        case GridAxis::n: return "n";
        case GridAxis::sigma_t: return "sigma_t";
        case GridAxis::sigma_r: return "sigma_r";
        case GridAxis::noise_level: return "noise level";
    }
    return "?";
}

}  // namespace trajkit
