#include "trajkit/stats.hpp"

#include <algorithm>
#include <cmath>

#include "trajkit/error.hpp"

namespace trajkit {

double quantile(std::vector<double> values, double p) {
    if (values.empty()) throw Error("empty sample");
    if (p < 0.0 || p > 1.0) throw Error("quantile fraction out of [0,1]");
    std::sort(values.begin(), values.end());
    const double h = static_cast<double>(values.size() - 1) * p;
    const auto lo = static_cast<std::size_t>(h);
    if (lo + 1 >= values.size()) return values.back();
    const double frac = h - static_cast<double>(lo);
    return values[lo] + frac * (values[lo + 1] - values[lo]);
}

double median(std::vector<double> values) { return quantile(std::move(values), 0.5); }

Vec3 geometric_median(const std::vector<Vec3>& points) {
    if (points.empty()) throw Error("empty sample");
    if (points.size() == 1) return points.front();

    Vec3 x = Vec3::Zero();
    for (const auto& p : points) x += p;
    x /= static_cast<double>(points.size());

    for (int iter = 0; iter < 200; ++iter) {
        Vec3 num = Vec3::Zero();
        double den = 0.0;
        for (const auto& p : points) {
            const double d = (x - p).norm();
            const double w = 1.0 / std::max(d, 1e-12);  // caps at 1e12
            num += w * p;
            den += w;
        }
        const Vec3 next = num / den;
        const double step = (next - x).norm();
        x = next;
        if (step < 1e-10) break;
    }
    return x;
}

double mad_about_median(const std::vector<Vec3>& points) {
    if (points.empty()) throw Error("empty sample");
    const Vec3 m = geometric_median(points);
    std::vector<double> dists;
    dists.reserve(points.size());
    for (const auto& p : points) dists.push_back((p - m).norm());
    return median(std::move(dists));
}

}  // namespace trajkit
