#include "trajkit/sim3.hpp"

#include <algorithm>
#include <cmath>

#include "trajkit/error.hpp"
#include "trajkit/rng.hpp"
#include "trajkit/stats.hpp"

namespace trajkit {

namespace {

Vec3 centroid(const std::vector<Vec3>& pts) {
    Vec3 c = Vec3::Zero();
    for (const auto& p : pts) c += p;
    return c / static_cast<double>(pts.size());
}

}  // namespace

SimilarityTransform umeyama(const std::vector<Vec3>& source, const std::vector<Vec3>& target,
                            bool with_scale) {
    if (source.size() != target.size()) throw Error("umeyama: length mismatch");
    const std::size_t n = source.size();
    if (n < 2) throw DegenerateError("umeyama: fewer than 2 points");

    const Vec3 mu_x = centroid(source);
    const Vec3 mu_y = centroid(target);

    Mat3 sigma = Mat3::Zero();  // target-source cross covariance
    double var_x = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Vec3 dx = source[i] - mu_x;
        const Vec3 dy = target[i] - mu_y;
        sigma += dy * dx.transpose();
        var_x += dx.squaredNorm();
    }
    const double inv_n = 1.0 / static_cast<double>(n);
    sigma *= inv_n;
    var_x *= inv_n;

    if (with_scale && var_x < 1e-24) throw DegenerateError("degenerate source");

    SimilarityTransform out;
    if (var_x < 1e-24) {
        // Coincident source, rigid case: rotation unconstrained, pick identity.
        out.translation = mu_y - mu_x;
        return out;
    }

    Eigen::JacobiSVD<Mat3> svd(sigma, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Vec3 d = Vec3::Ones();
    if ((svd.matrixU() * svd.matrixV().transpose()).determinant() < 0.0) d.z() = -1.0;
    const Mat3 rot = svd.matrixU() * d.asDiagonal() * svd.matrixV().transpose();

    out.rotation = Rotation(rot);
    out.scale = with_scale ? svd.singularValues().dot(d) / var_x : 1.0;
    if (with_scale && !(out.scale > 0.0)) throw DegenerateError("degenerate source");
    out.translation = mu_y - out.scale * (out.rotation * mu_x);
    return out;
}

SimilarityTransform se3_align(const std::vector<Vec3>& source, const std::vector<Vec3>& target) {
    return umeyama(source, target, /*with_scale=*/false);
}

double closest_pair_upper_quartile(const std::vector<Vec3>& positions) {
    const std::size_t n = positions.size();
    if (n < 2) throw DegenerateError("need at least two cameras");

    std::vector<double> nearest(n, std::numeric_limits<double>::infinity());
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double d = (positions[i] - positions[j]).norm();
            nearest[i] = std::min(nearest[i], d);
            nearest[j] = std::min(nearest[j], d);
        }
    }
    const double d = quantile(std::move(nearest), 0.75);
    if (d <= 0.0) throw DegenerateError("degenerate spacing");
    return d;
}

int registration_cost_rank(std::size_t n) {
    const double m = std::round(static_cast<double>(n) / 10.0);  // half away from zero
    return std::max(4, static_cast<int>(m));
}

namespace {

struct Triplet {
    std::size_t a, b, c;
};

Triplet draw_triplet(std::uint64_t seed, int draw_index, std::size_t n) {
    Rng rng = Rng::derive(seed, {static_cast<std::uint64_t>(draw_index)});
    Triplet t{};
    t.a = rng.uniform_below(n);
    do {
        t.b = rng.uniform_below(n);
    } while (t.b == t.a);
    do {
        t.c = rng.uniform_below(n);
    } while (t.c == t.a || t.c == t.b);
    return t;
}

// Spread of the three pairwise log scale ratios; infinity when any pair is
// (near-)coincident on either side.
double prescreen_spread(const std::vector<Vec3>& x, const std::vector<Vec3>& y, const Triplet& t) {
    const std::size_t idx[3][2] = {{t.a, t.b}, {t.b, t.c}, {t.c, t.a}};
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& p : idx) {
        const double dx = (x[p[0]] - x[p[1]]).norm();
        const double dy = (y[p[0]] - y[p[1]]).norm();
        if (dx <= 1e-12 || dy <= 1e-12) return std::numeric_limits<double>::infinity();
        const double r = std::log(dy) - std::log(dx);
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return hi - lo;
}

double hypothesis_cost(const SimilarityTransform& t, const std::vector<Vec3>& x,
                       const std::vector<Vec3>& y, int rank, std::vector<double>& scratch) {
    scratch.clear();
    for (std::size_t i = 0; i < x.size(); ++i) scratch.push_back((t.apply(x[i]) - y[i]).norm());
    std::nth_element(scratch.begin(), scratch.begin() + (rank - 1), scratch.end());
    return scratch[rank - 1];
}

}  // namespace

RegistrationResult register_robust(const std::vector<Vec3>& source,
                                   const std::vector<Vec3>& target,
                                   const RegistrationConfig& cfg) {
    if (source.size() != target.size()) throw Error("register_robust: length mismatch");
    const std::size_t n = source.size();
    if (n < 4) throw DegenerateError("register_robust: need at least 4 correspondences");
    if (cfg.hypothesis_target < 1) throw Error("register_robust: hypothesis_target must be >= 1");
    if (cfg.prescreen_log_tolerance <= 0.0) throw Error("register_robust: tolerance must be > 0");

    const int rank = registration_cost_rank(n);
    const int budget = cfg.draw_budget();

    RegistrationResult best;
    std::vector<double> scratch;
    scratch.reserve(n);
    std::vector<Vec3> tri_x(3), tri_y(3);

    double gamma = cfg.prescreen_log_tolerance;
    for (int relax = 0; relax <= 3; ++relax) {
        int passes = 0;
        for (int draw = 0; draw < budget && passes < cfg.hypothesis_target; ++draw) {
            ++best.draws_used;
            const Triplet t = draw_triplet(cfg.seed, draw, n);
            if (prescreen_spread(source, target, t) > gamma) continue;

            tri_x[0] = source[t.a];
            tri_x[1] = source[t.b];
            tri_x[2] = source[t.c];
            tri_y[0] = target[t.a];
            tri_y[1] = target[t.b];
            tri_y[2] = target[t.c];
            SimilarityTransform hyp;
            try {
                hyp = umeyama(tri_x, tri_y, /*with_scale=*/true);
            } catch (const DegenerateError&) {
                continue;
            }
            ++passes;

            const double cost = hypothesis_cost(hyp, source, target, rank, scratch);
            if (cost < best.cost) {  // strict: earliest draw wins ties
                best.cost = cost;
                best.transform = hyp;
            }
        }
        best.hypotheses_scored = passes;
        best.relaxations_used = relax;
        if (passes > 0) return best;
        gamma *= cfg.relax_factor;
    }

    best.transform = umeyama(source, target, /*with_scale=*/true);
    best.cost = hypothesis_cost(best.transform, source, target, rank, scratch);
    best.fallback = true;
    return best;
}

}  // namespace trajkit
