#pragma once

#include <string>
#include <utility>
#include <vector>

#include "trajkit/trajectory.hpp"

namespace trajkit {

enum class FileFormat { tum, csv };

FileFormat format_from_name(const std::string& name);

/// Loads a trajectory file. TUM lines are whitespace-separated
/// "timestamp tx ty tz qx qy qz qw"; CSV is the same, comma-separated, and
/// also accepts 4-column position-only rows. Lines starting with '#' are
/// skipped. Quaternions within 1e-3 of unit norm are renormalized, others
/// rejected; timestamps must be strictly increasing.
Trajectory load_trajectory(const std::string& path, FileFormat format);

/// Writes TUM or CSV with 9 significant digits (round-trips within 1e-9).
void save_trajectory(const Trajectory& t, const std::string& path, FileFormat format);

enum class AssocMode { index, timestamp };

struct Association {
    AssocMode mode = AssocMode::index;
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (gt index, est index)
    double tolerance = 0.02;
};

/// Greedy timestamp matching: candidate pairs within the tolerance are
/// taken smallest |dt| first, each record used at most once. Returned in
/// ascending gt-index order.
std::vector<std::pair<std::size_t, std::size_t>> greedy_timestamp_matches(
    const std::vector<double>& gt_times, const std::vector<double>& est_times, double tolerance);

/// Index mode pairs i <-> i and requires equal lengths; timestamp mode
/// greedily matches closest timestamps within the tolerance, each record
/// used at most once. Fewer than 4 matched pairs is an error.
Association associate(const Trajectory& gt, const Trajectory& est, AssocMode mode,
                      double tolerance = 0.02);

/// Applies an association, returning (gt subset, est subset) in pair order.
std::pair<Trajectory, Trajectory> apply_association(const Trajectory& gt, const Trajectory& est,
                                                    const Association& assoc);

}  // namespace trajkit
