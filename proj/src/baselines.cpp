#include "trajkit/baselines.hpp"

#include <algorithm>
#include <cmath>

#include "trajkit/error.hpp"
#include "trajkit/sim3.hpp"
#include "trajkit/so3_align.hpp"
#include "trajkit/stats.hpp"

namespace trajkit {

double ate(const Trajectory& gt, const Trajectory& est, bool with_scale) {
    if (!gt.has_positions() || !est.has_positions()) throw Error("ate: positions unavailable");
    if (gt.positions.size() != est.positions.size()) throw Error("ate: length mismatch");
    const std::size_t n = gt.positions.size();
    if (n < 2) throw DegenerateError("ate: need at least 2 cameras");

    const SimilarityTransform t = umeyama(est.positions, gt.positions, with_scale);
    double sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sum_sq += (t.apply(est.positions[i]) - gt.positions[i]).squaredNorm();
    }
    return std::sqrt(sum_sq / static_cast<double>(n));
}

double winsorized_mean(const std::vector<double>& errors, double tau) {
    if (errors.empty()) throw Error("winsorized_mean: empty errors");
    double sum = 0.0;
    for (double e : errors) sum += std::min(e, tau);
    return sum / static_cast<double>(errors.size());
}

namespace {

// L1 rotation fit min_R sum ||R x_i - y_i|| by iteratively reweighted
// Procrustes, starting from the L2 solution. Used by the DTE when camera
// rotations are unavailable.
Rotation irls_l1_rotation(const std::vector<Vec3>& x, const std::vector<Vec3>& y) {
    Rotation r = umeyama(x, y, /*with_scale=*/false).rotation;
    for (int iter = 0; iter < 100; ++iter) {
        Mat3 cov = Mat3::Zero();
        for (std::size_t i = 0; i < x.size(); ++i) {
            const double w = 1.0 / std::max((r * x[i] - y[i]).norm(), 1e-9);
            cov += w * y[i] * x[i].transpose();
        }
        Eigen::JacobiSVD<Mat3> svd(cov, Eigen::ComputeFullU | Eigen::ComputeFullV);
        Vec3 d = Vec3::Ones();
        if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d.z() = -1.0;
        const Rotation next(Mat3(svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose()));
        const double change = angular_distance_rad(r, next);
        r = next;
        if (change < 1e-10) break;
    }
    return r;
}

}  // namespace

double dte(const Trajectory& gt, const Trajectory& est, double k_w) {
    if (!gt.has_positions() || !est.has_positions()) throw Error("dte: positions unavailable");
    if (gt.positions.size() != est.positions.size()) throw Error("dte: length mismatch");
    const std::size_t n = gt.positions.size();
    if (n < 4) throw DegenerateError("dte: need at least 4 cameras");

    const Vec3 gm_gt = geometric_median(gt.positions);
    const Vec3 gm_est = geometric_median(est.positions);

    std::vector<Vec3> gt_c(n), est_c(n);
    for (std::size_t i = 0; i < n; ++i) {
        gt_c[i] = gt.positions[i] - gm_gt;
        est_c[i] = est.positions[i] - gm_est;
    }

    Rotation gauge;
    if (gt.has_rotations() && est.has_rotations()) {
        const auto residuals = relative_rotations(gt.rotations, est.rotations);
        gauge = geodesic_l1_median(residuals, chordal_l2_mean(residuals));
    } else {
        gauge = irls_l1_rotation(est_c, gt_c);
    }

    std::vector<double> gt_dists(n), est_dists(n);
    for (std::size_t i = 0; i < n; ++i) {
        gt_dists[i] = gt_c[i].norm();
        est_dists[i] = est_c[i].norm();
    }
    const double mad_gt = median(gt_dists);
    const double mad_est = median(est_dists);
    if (mad_gt <= 0.0 || mad_est <= 0.0) throw DegenerateError("dte: MAD = 0");
    const double scale = mad_gt / mad_est;

    std::vector<double> errors(n);
    for (std::size_t i = 0; i < n; ++i) {
        errors[i] = (scale * (gauge * est_c[i]) - gt_c[i]).norm();
    }
    return winsorized_mean(errors, k_w * mad_gt);
}

double dre(const std::vector<Rotation>& gt_rotations, const std::vector<Rotation>& est_rotations,
           double tau_deg) {
    if (gt_rotations.empty() || est_rotations.empty()) throw Error("dre: empty input");
    const auto residuals = relative_rotations(gt_rotations, est_rotations);
    const Rotation gauge = geodesic_l1_median(residuals, chordal_l2_mean(residuals));
    std::vector<double> angles;
    angles.reserve(residuals.size());
    for (const auto& s : residuals) angles.push_back(angular_distance(s, gauge));
    return winsorized_mean(angles, tau_deg);
}

double maa(const Trajectory& gt, const Trajectory& est) {
    if (!gt.has_positions() || !gt.has_rotations() || !est.has_positions() || !est.has_rotations())
        throw Error("maa: needs both rotations and positions");
    if (gt.size() != est.size()) throw Error("maa: length mismatch");
    const std::size_t n = gt.size();
    if (n < 2) throw DegenerateError("maa: need at least 2 cameras");

    std::vector<double> pair_errors;
    pair_errors.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const Vec3 base_gt = gt.positions[j] - gt.positions[i];
            if (base_gt.norm() < 1e-9) continue;  // degenerate pair, no direction

            const double rot_err =
                angular_distance(gt.rotations[j] * gt.rotations[i].inverse(),
                                 est.rotations[j] * est.rotations[i].inverse());

            const Vec3 base_est = est.positions[j] - est.positions[i];
            double dir_err;
            if (base_est.norm() < 1e-9) {
                dir_err = 180.0;
            } else {
                // Directions in the respective camera-i frames; this removes
                // the global gauge from both sides.
                const Vec3 u = (gt.rotations[i] * base_gt).normalized();
                const Vec3 v = (est.rotations[i] * base_est).normalized();
                const double dot = std::clamp(u.dot(v), -1.0, 1.0);
                dir_err = rad_to_deg(std::acos(dot));
            }
            pair_errors.push_back(std::max(rot_err, dir_err));
        }
    }
    if (pair_errors.empty()) throw DegenerateError("maa: all pairs degenerate");

    double acc_sum = 0.0;
    for (int t = 1; t <= 10; ++t) {
        int within = 0;
        // 1e-9 deg slack so errors constructed exactly at a threshold count.
        for (double e : pair_errors) {
            if (e <= static_cast<double>(t) + 1e-9) ++within;
        }
        acc_sum += static_cast<double>(within) / static_cast<double>(pair_errors.size());
    }
    return acc_sum / 10.0;
}

AngleStats angle_stats(const std::vector<double>& angles_deg) {
    if (angles_deg.empty()) throw Error("angle_stats: empty input");
    AngleStats out;
    out.median = median(angles_deg);
    double sum = 0.0, sum_sq = 0.0;
    for (double a : angles_deg) {
        sum += a;
        sum_sq += a * a;
    }
    const double n = static_cast<double>(angles_deg.size());
    out.mean = sum / n;
    out.rms = std::sqrt(sum_sq / n);
    return out;
}

AngleStats aligned_angle_stats(const std::vector<Rotation>& gt_rotations,
                               const std::vector<Rotation>& est_rotations, AlignNorm norm) {
    if (gt_rotations.empty()) throw Error("aligned_angle_stats: empty input");
    const auto residuals = relative_rotations(gt_rotations, est_rotations);
    const Rotation chordal = chordal_l2_mean(residuals);
    const Rotation gauge =
        (norm == AlignNorm::l1) ? geodesic_l1_median(residuals, chordal) : chordal;
    std::vector<double> angles;
    angles.reserve(residuals.size());
    for (const auto& s : residuals) angles.push_back(angular_distance(s, gauge));
    return angle_stats(angles);
}

BaselineReport compute_baselines(const Trajectory& gt, const Trajectory& est,
                                 const BaselineSelection& sel, double dte_k_w,
                                 double dre_tau_deg) {
    BaselineReport report;
    report.dte_k_w = dte_k_w;
    report.dre_tau_deg = dre_tau_deg;

    const auto attempt = [&](bool wanted, const char* name, auto&& compute) {
        if (!wanted) return;
        try {
            compute();
        } catch (const Error& e) {
            report.warnings.push_back(std::string(name) + ": " + e.what());
        }
    };
    const auto rotations_or_throw = [&]() {
        if (!gt.has_rotations() || !est.has_rotations()) throw Error("rotations unavailable");
    };

    attempt(sel.ate, "ate", [&] { report.ate = ate(gt, est); });
    attempt(sel.dte, "dte", [&] { report.dte = dte(gt, est, dte_k_w); });
    attempt(sel.dre, "dre", [&] {
        rotations_or_throw();
        report.dre = dre(gt.rotations, est.rotations, dre_tau_deg);
    });
    attempt(sel.maa, "maa", [&] { report.maa = maa(gt, est); });
    attempt(sel.stats_l1, "stats1", [&] {
        rotations_or_throw();
        report.stats_l1 = aligned_angle_stats(gt.rotations, est.rotations, AlignNorm::l1);
    });
    attempt(sel.stats_l2, "stats2", [&] {
        rotations_or_throw();
        report.stats_l2 = aligned_angle_stats(gt.rotations, est.rotations, AlignNorm::l2);
    });
    return report;
}

}  // namespace trajkit
