#pragma once

#include <cmath>
#include <cstdint>

namespace dom {

struct Vec3 {
    double x = 0.0, y = 0.0, z = 0.0;

    Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
    Vec3& operator+=(const Vec3& o) {
        x += o.x; y += o.y; z += o.z;
        return *this;
    }
    bool operator==(const Vec3& o) const = default;

    double dot(const Vec3& o) const { return x * o.x + y * o.y + z * o.z; }
    double norm() const { return std::sqrt(dot(*this)); }
    double horizontal_norm() const { return std::sqrt(x * x + y * y); }
};

inline Vec3 operator*(double s, const Vec3& v) { return v * s; }

// Moves `cur` toward `target` by at most `max_step`, reaching it exactly when
// within range. Shared by the simulator and the expert's belief propagation so
// both sides produce bit-identical end-effector trajectories.
inline Vec3 move_toward(const Vec3& cur, const Vec3& target, double max_step) {
    Vec3 delta = target - cur;
    double d = delta.norm();
    if (d <= max_step || d == 0.0) return target;
    return cur + delta * (max_step / d);
}

struct Quat {
    double w = 1.0, x = 0.0, y = 0.0, z = 0.0;

    bool operator==(const Quat& o) const = default;

    double norm() const { return std::sqrt(w * w + x * x + y * y + z * z); }

    Quat normalized() const {
        double n = norm();
        if (n == 0.0) return Quat{};
        return {w / n, x / n, y / n, z / n};
    }

    Quat operator*(const Quat& o) const {
        return {w * o.w - x * o.x - y * o.y - z * o.z,
                w * o.x + x * o.w + y * o.z - z * o.y,
                w * o.y - x * o.z + y * o.w + z * o.x,
                w * o.z + x * o.y - y * o.x + z * o.w};
    }
};

// Quaternion for a rotation of |omega|*dt radians about omega's axis.
inline Quat quat_from_angular_velocity(const Vec3& omega, double dt) {
    double speed = omega.norm();
    if (speed == 0.0) return Quat{};
    double angle = speed * dt;
    double s = std::sin(angle * 0.5) / speed;
    return Quat{std::cos(angle * 0.5), omega.x * s, omega.y * s, omega.z * s};
}

struct Pose6D {
    Vec3 position;
    Quat orientation;

    bool operator==(const Pose6D& o) const = default;
};

struct Box3 {
    Vec3 min;
    Vec3 max;

    bool contains(const Vec3& p) const {
        return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y &&
               p.z >= min.z && p.z <= max.z;
    }
};

}  // namespace dom
