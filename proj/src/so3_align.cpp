#include "trajkit/so3_align.hpp"

#include <cmath>

#include "trajkit/error.hpp"

namespace trajkit {

std::vector<Rotation> relative_rotations(const std::vector<Rotation>& gt,
                                         const std::vector<Rotation>& est) {
    if (gt.size() != est.size()) throw Error("relative_rotations: length mismatch");
    if (gt.empty()) throw Error("relative_rotations: empty input");
    std::vector<Rotation> out;
    out.reserve(gt.size());
    for (std::size_t i = 0; i < gt.size(); ++i) out.push_back(gt[i].inverse() * est[i]);
    return out;
}

double geodesic_cost(const Rotation& g, const std::vector<Rotation>& rotations) {
    double cost = 0.0;
    for (const auto& r : rotations) cost += angular_distance_rad(g, r);
    return cost;
}

Rotation geodesic_l1_median(const std::vector<Rotation>& rotations, const Rotation& init,
                            WeiszfeldTrace* trace) {
    if (rotations.empty()) throw Error("geodesic_l1_median: empty input");

    Rotation g = init;
    for (int iter = 0; iter < 100; ++iter) {
        if (trace) {
            trace->costs.push_back(geodesic_cost(g, rotations));
            trace->iterations = iter;
        }
        Vec3 v = Vec3::Zero();
        double wsum = 0.0;
        const Rotation g_inv = g.inverse();
        for (const auto& s : rotations) {
            const Vec3 delta = (g_inv * s).log();
            const double w = 1.0 / std::max(delta.norm(), 1e-6);
            v += w * delta;
            wsum += w;
        }
        v /= wsum;
        if (v.norm() < 1e-9) break;
        g = g * Rotation::exp(v);
    }
    if (trace) trace->costs.push_back(geodesic_cost(g, rotations));
    return g;
}

Rotation chordal_l2_mean(const std::vector<Rotation>& rotations) {
    if (rotations.empty()) throw Error("chordal_l2_mean: empty input");

    Mat3 mean = Mat3::Zero();
    for (const auto& r : rotations) mean += r.matrix();
    mean /= static_cast<double>(rotations.size());

    Eigen::JacobiSVD<Mat3> svd(mean, Eigen::ComputeFullU | Eigen::ComputeFullV);
    if (svd.singularValues()(1) < 1e-9) throw DegenerateError("indeterminate mean");
    Vec3 d = Vec3::Ones();
    if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d.z() = -1.0;
    return Rotation(Mat3(svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose()));
}

Rotation robust_single_rotation_average(const std::vector<Rotation>& rotations) {
    if (rotations.empty()) throw Error("robust_single_rotation_average: empty input");
    if (rotations.size() == 1) return rotations.front();

    // O(n^2) scan for the element closest to all others under the L1 sum.
    std::size_t best_idx = 0;
    double best_sum = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < rotations.size(); ++i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < rotations.size(); ++j) {
            if (j != i) sum += angular_distance_rad(rotations[i], rotations[j]);
        }
        if (sum < best_sum) {  // strict: lowest index wins ties
            best_sum = sum;
            best_idx = i;
        }
    }
    return geodesic_l1_median(rotations, rotations[best_idx]);
}

}  // namespace trajkit
