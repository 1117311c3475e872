#pragma once

#include <Eigen/Dense>
#include <Eigen/Geometry>

#include "trajkit/rng.hpp"

namespace trajkit {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline constexpr double kPi = 3.14159265358979323846;

inline double deg_to_rad(double deg) { return deg * (kPi / 180.0); }
inline double rad_to_deg(double rad) { return rad * (180.0 / kPi); }

// A rotation stored as a unit quaternion, canonicalized to w >= 0 so that
// serialization is reproducible. q and -q are the same rotation; all
// distances are sign-agnostic regardless of the canonical form.
class Rotation {
public:
    Rotation() : q_(1.0, 0.0, 0.0, 0.0) {}

    /// From quaternion components (w, x, y, z); renormalizes.
    Rotation(double w, double x, double y, double z) : q_(w, x, y, z) { canonicalize(); }

    explicit Rotation(const Eigen::Quaterniond& q) : q_(q) { canonicalize(); }

    explicit Rotation(const Mat3& m) : q_(m) { canonicalize(); }

    static Rotation identity() { return Rotation(); }

    static Rotation from_axis_angle(const Vec3& axis, double angle_rad) {
        return Rotation(Eigen::Quaterniond(Eigen::AngleAxisd(angle_rad, axis.normalized())));
    }

    /// Exponential map: rotation vector (radians) -> rotation.
    static Rotation exp(const Vec3& v) {
        const double theta = v.norm();
        if (theta < 1e-12) {
            return Rotation(Eigen::Quaterniond(1.0, 0.5 * v.x(), 0.5 * v.y(), 0.5 * v.z()));
        }
        return from_axis_angle(v / theta, theta);
    }

    /// Logarithm map: rotation -> rotation vector (radians), angle in [0, pi].
    Vec3 log() const {
        // w >= 0 after canonicalization, so the angle is already the short one.
        const double sin_half = q_.vec().norm();
        const double cos_half = q_.w();
        if (sin_half < 1e-12) return 2.0 * q_.vec();
        const double angle = 2.0 * std::atan2(sin_half, cos_half);
        return (angle / sin_half) * q_.vec();
    }

    double angle_rad() const {
        return 2.0 * std::atan2(q_.vec().norm(), std::abs(q_.w()));
    }

    Rotation inverse() const { return Rotation(q_.conjugate()); }

    Rotation operator*(const Rotation& rhs) const { return Rotation(q_ * rhs.q_); }

    Vec3 operator*(const Vec3& v) const { return q_ * v; }

    Mat3 matrix() const { return q_.toRotationMatrix(); }

    double w() const { return q_.w(); }
    double x() const { return q_.x(); }
    double y() const { return q_.y(); }
    double z() const { return q_.z(); }
    const Eigen::Quaterniond& quaternion() const { return q_; }

private:
    void canonicalize() {
        q_.normalize();
        if (q_.w() < 0.0) q_.coeffs() = -q_.coeffs();
    }

    Eigen::Quaterniond q_;
};

/// Geodesic distance on SO(3) in radians: the rotation angle of a^-1 * b.
/// The chord between unit quaternions is ||q_a -/+ q_b|| = 2 sin(theta/4)
/// (sign chosen for the shorter arc), so theta = 4 asin(chord/2); this is
/// exact for q vs -q and well conditioned near 0 where acos(trace) is not.
inline double angular_distance_rad(const Rotation& a, const Rotation& b) {
    const Eigen::Vector4d va = a.quaternion().coeffs();
    const Eigen::Vector4d vb = b.quaternion().coeffs();
    const double d = std::min((va - vb).norm(), (va + vb).norm());
    return 4.0 * std::asin(std::min(1.0, 0.5 * d));
}

/// Geodesic distance in degrees, range [0, 180].
inline double angular_distance(const Rotation& a, const Rotation& b) {
    return rad_to_deg(angular_distance_rad(a, b));
}

/// Raw Haar-uniform unit quaternion (4 standard Gaussians, normalized).
/// Not sign-canonicalized; covers the whole 3-sphere.
inline Eigen::Quaterniond random_unit_quaternion(Rng& rng) {
    Eigen::Quaterniond q;
    do {
        q = Eigen::Quaterniond(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    } while (q.norm() < 1e-9);
    q.normalize();
    return q;
}

/// Haar-uniform rotation on SO(3).
inline Rotation random_rotation(Rng& rng) { return Rotation(random_unit_quaternion(rng)); }

/// Uniform direction on the unit sphere.
inline Vec3 random_unit_vector(Rng& rng) {
    Vec3 v;
    do {
        v = Vec3(rng.normal(), rng.normal(), rng.normal());
    } while (v.norm() < 1e-9);
    return v.normalized();
}

/// Compose r with a rotation about a uniformly random axis by a signed
/// angle drawn from N(0, sigma_deg^2). sigma_deg = 0 returns r unchanged.
inline Rotation perturb_rotation(const Rotation& r, double sigma_deg, Rng& rng) {
    if (sigma_deg == 0.0) return r;
    const Vec3 axis = random_unit_vector(rng);
    const double angle = deg_to_rad(rng.normal(0.0, sigma_deg));
    return r * Rotation::from_axis_angle(axis, angle);
}

}  // namespace trajkit
