#ifndef PERCMON_TYPES_HPP_
#define PERCMON_TYPES_HPP_

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace percmon {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double norm() const { return std::hypot(x, y); }
};

/// One perceived object at one frame: pose, speed, heading, bounding box and
/// per-field 1-sigma uncertainty margins. Speed is the absolute value of the
/// velocity vector; heading is the direction of motion in the world frame.
struct ObjectState {
    std::int64_t id = 0;
    std::int64_t frame = 0;
    double t = 0.0;      // seconds
    double x = 0.0;      // meters, world frame
    double y = 0.0;      // meters, world frame
    double v = 0.0;      // m/s, >= 0
    double theta = 0.0;  // radians, in (-pi, pi]
    double l = 1.0;      // bounding box length, meters
    double w = 1.0;      // bounding box width, meters
    double dx = 0.0;     // position margins, meters
    double dy = 0.0;
    double dv = 0.0;     // speed margin, m/s
    double dtheta = 0.0; // heading margin, radians (0 = not supplied)
    double dl = 0.0;     // dimension margins, meters
    double dw = 0.0;
};

struct EgoPose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
    std::int64_t frame = 0;
    double t = 0.0;
};

/// Obstacle returns in the world frame; ground-plane and underpassable points
/// are excluded upstream by the sensor model.
struct PointCloud2D {
    std::int64_t frame = 0;
    std::vector<Vec2> points;
};

enum class ErrorKind {
    PositionPermanent,
    PositionRandom,
    SpeedPermanent,
    SpeedTransient,
    Noise,
};

std::string to_string(ErrorKind kind);
ErrorKind error_kind_from_string(const std::string& s);

/// Ground-truth ledger entry for one applied fault.
struct InjectedError {
    std::int64_t frame = 0;
    std::int64_t object_id = 0;
    ErrorKind kind = ErrorKind::PositionPermanent;
    double magnitude = 0.0;
    double dx_applied = 0.0;
    double dy_applied = 0.0;
    double dv_applied = 0.0;
    bool clamped = false;
};

struct PolarVelocity {
    double v = 0.0;
    double theta = 0.0;
};

/// Speed/heading from velocity components. Total function; the zero vector
/// maps to (0, 0) by convention.
PolarVelocity velocity_to_polar(double vx, double vy);

/// Inverse of velocity_to_polar.
Vec2 polar_to_velocity(double v, double theta);

/// Wraps an angle into (-pi, pi].
double normalize_angle(double theta);

class ZeroIntervalError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class FrameMismatchError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace percmon

#endif  // PERCMON_TYPES_HPP_
