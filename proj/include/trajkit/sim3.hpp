#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "trajkit/geometry.hpp"

namespace trajkit {

// Similarity transform x -> s * R * x + t with s > 0.
struct SimilarityTransform {
    double scale = 1.0;
    Rotation rotation;
    Vec3 translation = Vec3::Zero();

    Vec3 apply(const Vec3& x) const { return scale * (rotation * x) + translation; }

    SimilarityTransform inverse() const {
        SimilarityTransform inv;
        inv.scale = 1.0 / scale;
        inv.rotation = rotation.inverse();
        inv.translation = -(inv.scale * (inv.rotation * translation));
        return inv;
    }

    /// Composition: (a * b).apply(x) == a.apply(b.apply(x)).
    SimilarityTransform operator*(const SimilarityTransform& b) const {
        SimilarityTransform out;
        out.scale = scale * b.scale;
        out.rotation = rotation * b.rotation;
        out.translation = apply(b.translation);
        return out;
    }
};

/// Closed-form least-squares similarity (or rigid, with_scale=false)
/// alignment minimizing sum ||s R x_i + t - y_i||^2. Rotation from the SVD
/// of the centered cross-covariance with determinant sign correction.
/// Throws on length mismatch, fewer than 2 points, or (when with_scale)
/// coincident source points ("degenerate source").
SimilarityTransform umeyama(const std::vector<Vec3>& source, const std::vector<Vec3>& target,
                            bool with_scale);

/// Rigid alignment (scale fixed to 1).
SimilarityTransform se3_align(const std::vector<Vec3>& source, const std::vector<Vec3>& target);

/// Upper quartile of each camera's nearest-neighbor distance (Q3 with the
/// linear-interpolation quantile). Brute force O(n^2).
/// Throws "need at least two cameras" (n < 2) and "degenerate spacing" (0).
double closest_pair_upper_quartile(const std::vector<Vec3>& positions);

struct RegistrationConfig {
    int hypothesis_target = 1000;
    int max_triplet_draws = 0;  // 0 = 100 * hypothesis_target
    double prescreen_log_tolerance = 0.1;
    double relax_factor = 2.0;  // applied up to 3 times if nothing passes
    std::uint64_t seed = 0;

    int draw_budget() const {
        return max_triplet_draws > 0 ? max_triplet_draws : 100 * hypothesis_target;
    }
};

struct RegistrationResult {
    SimilarityTransform transform;
    double cost = std::numeric_limits<double>::infinity();  // m-th smallest residual
    int hypotheses_scored = 0;
    int draws_used = 0;
    int relaxations_used = 0;
    bool fallback = false;  // no hypothesis passed; full-set umeyama used
};

/// Robust Sim(3) registration of source onto target:
///   - draw index triplets uniformly (no repeats within a triplet),
///   - prescreen on the spread of the three pairwise log scale ratios,
///   - fit each passing triplet with 3-point umeyama (with scale),
///   - cost = m-th smallest residual over all points, m = max(4, round(n/10)),
///   - return the minimum-cost hypothesis (ties broken by draw index).
/// Collects hypothesis_target passes or exhausts the draw budget; if nothing
/// passes, the tolerance is relaxed up to 3 times, then falls back to
/// umeyama on all correspondences with the fallback flag set.
/// Deterministic for a fixed seed: per-draw randomness is derived from the
/// draw counter. Requires n >= 4.
RegistrationResult register_robust(const std::vector<Vec3>& source,
                                   const std::vector<Vec3>& target,
                                   const RegistrationConfig& cfg = {});

/// Eq-style rank for the registration cost: max(4, round(n/10)),
/// rounding half away from zero. 1-based.
int registration_cost_rank(std::size_t n);

}  // namespace trajkit
