#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "trajkit/geometry.hpp"
#include "trajkit/sim3.hpp"
#include "trajkit/trajectory.hpp"

namespace trajkit {

// Cumulative frequency histogram over 100 uniform thresholds
// tau_k = max_threshold * k/100, k = 1..100, with inclusive counting
// f_k = #{i : e_i <= tau_k}.
struct CumulativeHistogram {
    double max_threshold = 0.0;
    std::array<int, 100> cumulative{};
    int total = 0;

    /// k in 1..100. tau_100 == max_threshold exactly.
    double threshold(int k) const { return max_threshold * (static_cast<double>(k) / 100.0); }
};

/// Cumulative-frequency score: sum_k f_k / (100 n), in [0, 1]. The score is
/// 1 iff every error is <= tau_1, 0 iff every error exceeds max_threshold.
/// Errors must be non-negative, non-empty; max_threshold > 0.
std::pair<double, CumulativeHistogram> score_from_errors(const std::vector<double>& errors,
                                                         double max_threshold);

struct TasConfig {
    RegistrationConfig registration;
    double max_threshold_scale = 1.0;  // multiplier on d (sensitivity knob)
};

struct RasConfig {
    double max_threshold_deg = 10.0;
};

struct ScoreReport {
    std::optional<double> tas;
    std::optional<double> ras;
    std::optional<double> pas;
    double alpha = 0.5;

    std::optional<double> d;  // upper quartile of gt nearest-neighbor distances
    std::vector<double> distance_errors;  // per camera, after registration
    std::vector<double> angular_errors;   // per camera (degrees), after alignment
    std::optional<CumulativeHistogram> tas_histogram;
    std::optional<CumulativeHistogram> ras_histogram;
    std::optional<SimilarityTransform> tas_alignment;
    std::optional<Rotation> ras_gauge;
    bool registration_fallback = false;
    std::vector<std::string> warnings;
};

/// Translation Alignment Score. Uses positions only; requires n >= 4 and a
/// non-degenerate ground-truth spacing (d > 0). Fills tas, d,
/// distance_errors, tas_histogram, tas_alignment on the given report.
void compute_tas(const std::vector<Vec3>& gt_positions, const std::vector<Vec3>& est_positions,
                 const TasConfig& cfg, ScoreReport& report);

/// Rotation Alignment Score. Uses rotations only; requires n >= 1.
/// Fills ras, angular_errors, ras_histogram, ras_gauge.
void compute_ras(const std::vector<Rotation>& gt_rotations,
                 const std::vector<Rotation>& est_rotations, const RasConfig& cfg,
                 ScoreReport& report);

/// Pose Alignment Score: alpha * tas + (1 - alpha) * ras. Both inputs and
/// alpha must lie in [0, 1]; alpha = 0.5 is the plain average.
double pas(double tas_value, double ras_value, double alpha = 0.5);

/// Convenience wrappers returning just the score.
double tas(const Trajectory& gt, const Trajectory& est, const TasConfig& cfg = {});
double ras(const Trajectory& gt, const Trajectory& est, const RasConfig& cfg = {});

}  // namespace trajkit
