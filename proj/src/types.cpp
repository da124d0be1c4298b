#include "percmon/types.hpp"

#include <cmath>

namespace percmon {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
}

PolarVelocity velocity_to_polar(double vx, double vy) {
    PolarVelocity p;
    p.v = std::hypot(vx, vy);
    p.theta = (p.v == 0.0) ? 0.0 : std::atan2(vy, vx);
    return p;
}

Vec2 polar_to_velocity(double v, double theta) {
    return {v * std::cos(theta), v * std::sin(theta)};
}

double normalize_angle(double theta) {
    double r = std::remainder(theta, kTwoPi);
    if (r <= -M_PI) r += kTwoPi;
    return r;
}

std::string to_string(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::PositionPermanent: return "position_permanent";
        case ErrorKind::PositionRandom: return "position_random";
        case ErrorKind::SpeedPermanent: return "speed_permanent";
        case ErrorKind::SpeedTransient: return "speed_transient";
        case ErrorKind::Noise: return "noise";
    }
    return "unknown";
}

ErrorKind error_kind_from_string(const std::string& s) {
    if (s == "position_permanent") return ErrorKind::PositionPermanent;
    if (s == "position_random") return ErrorKind::PositionRandom;
    if (s == "speed_permanent") return ErrorKind::SpeedPermanent;
    if (s == "speed_transient") return ErrorKind::SpeedTransient;
    if (s == "noise") return ErrorKind::Noise;
    throw ConfigError("unknown error kind: " + s);
}

}  // namespace percmon
