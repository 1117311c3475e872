#pragma once

#include <vector>

#include "trajkit/geometry.hpp"

namespace trajkit {

/// Per-camera gauge residuals S_i = gt_i^-1 * est_i. When the estimate
/// differs from the ground truth by a single world-frame rotation G
/// (est_i = gt_i * G), every residual equals G.
std::vector<Rotation> relative_rotations(const std::vector<Rotation>& gt,
                                         const std::vector<Rotation>& est);

/// Optional convergence trace for the Weiszfeld iterations (test hook).
struct WeiszfeldTrace {
    std::vector<double> costs;  // sum of geodesic distances, per iteration
    int iterations = 0;
};

/// Geodesic L1 median on SO(3) (Weiszfeld): tangent-space steps
/// v = sum(w_i log(G^-1 S_i)) / sum(w_i) with w_i = 1/max(d_geo, 1e-6 rad),
/// stopping when ||v|| < 1e-9 rad or after 100 iterations.
Rotation geodesic_l1_median(const std::vector<Rotation>& rotations, const Rotation& init,
                            WeiszfeldTrace* trace = nullptr);

/// Arithmetic mean of the rotation matrices projected onto SO(3) via SVD
/// with determinant correction. Throws "indeterminate mean" when the mean
/// matrix is rank deficient (e.g. antipodal inputs).
Rotation chordal_l2_mean(const std::vector<Rotation>& rotations);

/// Robust single rotation average: initialize at the input element with the
/// smallest sum of geodesic distances to all others (lowest index wins
/// ties), then run the geodesic L1 median from there.
Rotation robust_single_rotation_average(const std::vector<Rotation>& rotations);

/// Sum of geodesic distances (radians) from g to every element.
double geodesic_cost(const Rotation& g, const std::vector<Rotation>& rotations);

}  // namespace trajkit
