#pragma once

#include <cstddef>
#include <vector>

#include "trajkit/geometry.hpp"

namespace trajkit {

// A set of camera poses in a common world frame. Rotations map world-frame
// vectors into the camera frame (x_cam = R * (x_world - c)); positions c are
// world-frame. Rotations and timestamps are optional: a position-only
// trajectory has an empty `rotations`, a rotation-only one an empty
// `positions`. When present, the vectors are index-aligned.
struct Trajectory {
    std::vector<Vec3> positions;
    std::vector<Rotation> rotations;
    std::vector<double> timestamps;

    std::size_t size() const {
        return positions.empty() ? rotations.size() : positions.size();
    }
    bool has_positions() const { return !positions.empty(); }
    bool has_rotations() const { return !rotations.empty(); }
    bool has_timestamps() const { return !timestamps.empty(); }
};

}  // namespace trajkit
