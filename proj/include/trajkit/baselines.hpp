#pragma once

#include <optional>
#include <string>
#include <vector>

#include "trajkit/geometry.hpp"
#include "trajkit/trajectory.hpp"

namespace trajkit {

/// Absolute trajectory error: RMSE of position errors after least-squares
/// rigid alignment (Sim(3) when with_scale). Requires n >= 2.
double ate(const Trajectory& gt, const Trajectory& est, bool with_scale = false);

/// Discernible trajectory error: center both trajectories on their
/// geometric medians, rotate the estimate by the geodesic L1 median of the
/// per-camera residual rotations (or, without rotations, by the rotation
/// minimizing the L1 sum of position residuals), scale so the MADs match,
/// then average the errors winsorized at k_w * MAD(gt). Requires n >= 4.
double dte(const Trajectory& gt, const Trajectory& est, double k_w = 1.0);

/// Discernible rotation error: align by the geodesic L1 median of the
/// residual rotations, then average the residual angles winsorized at
/// tau_deg.
double dre(const std::vector<Rotation>& gt_rotations, const std::vector<Rotation>& est_rotations,
           double tau_deg = 90.0);

/// Mean average accuracy over all camera pairs: per pair, the error is the
/// larger of the relative-rotation angle and the angle between the
/// translation directions expressed in the first camera's frame; mAA is the
/// mean over thresholds 1..10 degrees of the fraction of pairs within
/// threshold. Pairs with ground-truth baseline < 1e-9 are skipped; a
/// collapsed estimated baseline counts as 180 degrees. Requires n >= 2 with
/// both rotations and positions.
double maa(const Trajectory& gt, const Trajectory& est);

enum class AlignNorm { l1, l2 };

struct AngleStats {
    double median = 0.0;
    double mean = 0.0;
    double rms = 0.0;
};

/// Median/mean/RMS (degrees) of residual angles about a frozen gauge.
AngleStats angle_stats(const std::vector<double>& angles_deg);

/// Median/mean/RMS of the angular errors after aligning the rotation sets:
/// L1 = geodesic Weiszfeld median initialized at the chordal mean,
/// L2 = chordal mean projection.
AngleStats aligned_angle_stats(const std::vector<Rotation>& gt_rotations,
                               const std::vector<Rotation>& est_rotations, AlignNorm norm);

/// Mean of min(e_i, tau): the winsorized-error kernel shared by DTE/DRE.
double winsorized_mean(const std::vector<double>& errors, double tau);

struct BaselineReport {
    std::optional<double> ate;
    std::optional<double> dte;
    std::optional<double> dre;
    std::optional<double> maa;
    std::optional<AngleStats> stats_l1;
    std::optional<AngleStats> stats_l2;
    double dte_k_w = 1.0;
    double dre_tau_deg = 90.0;
    std::vector<std::string> warnings;  // "metric: reason" for each failure
};

struct BaselineSelection {
    bool ate = true;
    bool dte = true;
    bool dre = true;
    bool maa = true;
    bool stats_l1 = true;
    bool stats_l2 = true;
};

/// Computes the selected baselines; metrics that fail on the given data are
/// left unset with a warning instead of aborting the rest.
BaselineReport compute_baselines(const Trajectory& gt, const Trajectory& est,
                                 const BaselineSelection& sel = {}, double dte_k_w = 1.0,
                                 double dre_tau_deg = 90.0);

}  // namespace trajkit
