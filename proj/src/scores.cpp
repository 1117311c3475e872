#include "trajkit/scores.hpp"

#include <algorithm>
#include <cmath>

#include "trajkit/error.hpp"
#include "trajkit/so3_align.hpp"

namespace trajkit {

std::pair<double, CumulativeHistogram> score_from_errors(const std::vector<double>& errors,
                                                         double max_threshold) {
    if (errors.empty()) throw Error("score_from_errors: empty errors");
    if (!(max_threshold > 0.0)) throw Error("score_from_errors: max_threshold must be > 0");
    for (double e : errors) {
        if (!(e >= 0.0)) throw Error("score_from_errors: negative error");
    }

    std::vector<double> sorted = errors;
    std::sort(sorted.begin(), sorted.end());

    CumulativeHistogram hist;
    hist.max_threshold = max_threshold;
    hist.total = static_cast<int>(errors.size());

    long long sum = 0;
    for (int k = 1; k <= 100; ++k) {
        const double tau = hist.threshold(k);
        const auto it = std::upper_bound(sorted.begin(), sorted.end(), tau);
        const int f = static_cast<int>(it - sorted.begin());
        hist.cumulative[k - 1] = f;
        sum += f;
    }
    const double score = static_cast<double>(sum) / (100.0 * static_cast<double>(hist.total));
    return {score, hist};
}

void compute_tas(const std::vector<Vec3>& gt_positions, const std::vector<Vec3>& est_positions,
                 const TasConfig& cfg, ScoreReport& report) {
    if (gt_positions.size() != est_positions.size()) throw Error("tas: length mismatch");
    if (gt_positions.size() < 4) throw DegenerateError("tas: need at least 4 cameras");

    const double d = closest_pair_upper_quartile(gt_positions);
    report.d = d;

    const RegistrationResult reg = register_robust(est_positions, gt_positions, cfg.registration);
    if (reg.fallback) {
        report.registration_fallback = true;
        report.warnings.push_back("tas: registration fell back to full-set umeyama");
    }
    report.tas_alignment = reg.transform;

    report.distance_errors.clear();
    report.distance_errors.reserve(gt_positions.size());
    for (std::size_t i = 0; i < gt_positions.size(); ++i) {
        report.distance_errors.push_back((reg.transform.apply(est_positions[i]) - gt_positions[i]).norm());
    }

    auto [score, hist] = score_from_errors(report.distance_errors, d * cfg.max_threshold_scale);
    report.tas = score;
    report.tas_histogram = hist;
}

void compute_ras(const std::vector<Rotation>& gt_rotations,
                 const std::vector<Rotation>& est_rotations, const RasConfig& cfg,
                 ScoreReport& report) {
    if (gt_rotations.size() != est_rotations.size()) throw Error("ras: length mismatch");
    if (gt_rotations.empty()) throw Error("ras: empty input");

    const std::vector<Rotation> residuals = relative_rotations(gt_rotations, est_rotations);
    const Rotation gauge = robust_single_rotation_average(residuals);
    report.ras_gauge = gauge;

    report.angular_errors.clear();
    report.angular_errors.reserve(residuals.size());
    for (const auto& s : residuals) report.angular_errors.push_back(angular_distance(s, gauge));

    auto [score, hist] = score_from_errors(report.angular_errors, cfg.max_threshold_deg);
    report.ras = score;
    report.ras_histogram = hist;
}

double pas(double tas_value, double ras_value, double alpha) {
    if (!(tas_value >= 0.0 && tas_value <= 1.0)) throw Error("pas: tas out of [0,1]");
    if (!(ras_value >= 0.0 && ras_value <= 1.0)) throw Error("pas: ras out of [0,1]");
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw Error("pas: alpha out of [0,1]");
    return alpha * tas_value + (1.0 - alpha) * ras_value;
}

double tas(const Trajectory& gt, const Trajectory& est, const TasConfig& cfg) {
    if (!gt.has_positions() || !est.has_positions()) throw Error("tas: positions unavailable");
    ScoreReport report;
    compute_tas(gt.positions, est.positions, cfg, report);
    return *report.tas;
}

double ras(const Trajectory& gt, const Trajectory& est, const RasConfig& cfg) {
    if (!gt.has_rotations() || !est.has_rotations()) throw Error("ras: rotations unavailable");
    ScoreReport report;
    compute_ras(gt.rotations, est.rotations, cfg, report);
    return *report.ras;
}

}  // namespace trajkit
