#pragma once

#include <vector>

#include "trajkit/geometry.hpp"

namespace trajkit {

/// Linear-interpolation quantile on the sorted values: h = (len-1)*p,
/// result = v[floor(h)] + frac(h) * (v[floor(h)+1] - v[floor(h)]).
/// Throws Error("empty sample") on empty input; requires 0 <= p <= 1.
double quantile(std::vector<double> values, double p);

/// quantile(values, 0.5).
double median(std::vector<double> values);

/// L1 (geometric) median by Weiszfeld iteration from the centroid.
/// Converged when the step is below 1e-10 or after 200 iterations; points
/// within 1e-12 of the iterate get their weight capped at 1e12.
Vec3 geometric_median(const std::vector<Vec3>& points);

/// Median of ||p_i - geometric_median(points)||.
double mad_about_median(const std::vector<Vec3>& points);

}  // namespace trajkit
