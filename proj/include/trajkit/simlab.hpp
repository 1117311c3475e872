#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "trajkit/rng.hpp"
#include "trajkit/trajectory.hpp"

namespace trajkit {

enum class GeneratorKind { random_box, collinear, varying_n, rotation_only };

enum class VolumeRule {
    volume_10n,      // cube volume = 10 * n
    density_10_per,  // 10 cameras per unit cube: volume = n / 10
};

enum class Metric {
    tas,
    ras,
    pas,
    ate,
    dte,
    dre,
    maa,
    median1,
    mean1,
    rms1,
    median2,
    mean2,
    rms2,
};

std::string metric_name(Metric m);
Metric metric_from_name(const std::string& name);

// One simulation cell: a fixed generator and noise/outlier setting,
// repeated `runs` times with independently derived seeds.
struct ScenarioConfig {
    GeneratorKind kind = GeneratorKind::random_box;
    int n = 100;
    double sigma_t = 0.0;
    double sigma_r_deg = 0.0;
    int outliers = 0;
    int runs = 50;
    std::uint64_t master_seed = 0;
    VolumeRule volume_rule = VolumeRule::volume_10n;

    /// Stable hash of the cell's parameters (excluding runs/master_seed);
    /// run seeds derive from (master_seed, cell_id, run), so neither grid
    /// layout nor run order affects any value.
    std::uint64_t cell_id() const;
};

std::string generator_name(GeneratorKind k);

/// Positions uniform in [-0.5, 0.5]^3, Haar-uniform rotations.
Trajectory gen_random_box(int n, Rng& rng);

/// Positions (i, 0, 0) for i = 0..n-1, Haar-uniform rotations. n >= 2.
Trajectory gen_collinear(int n, Rng& rng);

/// Positions uniform in a cube of volume 10n (or n/10 under the density
/// rule), Haar-uniform rotations. n >= 4.
Trajectory gen_varying_n(int n, Rng& rng, VolumeRule rule = VolumeRule::volume_10n);

/// Haar-uniform rotations only (no positions).
Trajectory gen_rotations_only(int n, Rng& rng);

double varying_n_side(int n, VolumeRule rule);

/// Adds N(0, sigma_t^2) to every position component and perturbs every
/// rotation by a random-axis angle ~ N(0, sigma_r_deg^2).
Trajectory perturb_trajectory(const Trajectory& t, double sigma_t, double sigma_r_deg, Rng& rng);

/// Replaces a uniformly random subset of `count` poses with outliers:
/// position uniform in [-5, 5]^3 and a Haar-uniform rotation. Trajectories
/// without positions get only their rotations replaced. count <= n.
Trajectory inject_outliers(const Trajectory& t, int count, Rng& rng);

struct MetricSummary {
    double mean = 0.0;
    double min = 0.0;
    double max = 0.0;
    int valid_runs = 0;
};

struct CellResult {
    ScenarioConfig scenario;
    std::map<Metric, std::vector<double>> per_run;  // NaN where a metric failed
    std::map<Metric, MetricSummary> summary;        // over valid runs
    std::vector<std::string> flags;                 // "run 3 tas: <reason>"
};

/// Generates (gt, est) for one run of a cell. Exposed for tests.
std::pair<Trajectory, Trajectory> generate_run(const ScenarioConfig& cell, int run);

/// Evaluates the requested metrics for one (gt, est) pair; failures are
/// recorded as NaN plus a flag instead of aborting.
std::map<Metric, double> evaluate_metrics(const Trajectory& gt, const Trajectory& est,
                                          const std::vector<Metric>& metrics,
                                          std::uint64_t run_seed,
                                          std::vector<std::string>* flags = nullptr);

/// Runs every cell x run, in parallel across runs, with results identical
/// to sequential execution (all randomness is derived per (cell, run)).
std::vector<CellResult> run_grid(const std::vector<ScenarioConfig>& cells,
                                 const std::vector<Metric>& metrics, int threads = 0);

// Axes a grid is plotted against: x-axis positions and one line per level.
enum class GridAxis { outliers, n, sigma_t, sigma_r, noise_level };

struct GridSpec {
    std::string name;
    std::vector<ScenarioConfig> cells;
    std::vector<Metric> metrics;
    GridAxis x_axis = GridAxis::outliers;
    GridAxis line_axis = GridAxis::sigma_t;
};

/// Built-in grids "fig2".."fig7c" reproducing the simulation protocols.
GridSpec make_grid(const std::string& name, int runs, std::uint64_t master_seed);

bool is_builtin_grid(const std::string& name);

/// Axis value of a cell (outlier count, n, sigma, or coupled-noise index).
double axis_value(const ScenarioConfig& cell, GridAxis axis);

std::string axis_label(GridAxis axis);

}  // namespace trajkit
