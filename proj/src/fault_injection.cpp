#include "percmon/fault_injection.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <unordered_map>

#include "percmon/rng.hpp"

namespace percmon {

namespace {

constexpr double kDegenerateDistance = 1e-9;

// rng substream salts per injection kind
constexpr std::uint64_t kSaltRandomPosition = 1;
constexpr std::uint64_t kSaltTransientSpeed = 2;
constexpr std::uint64_t kSaltNoise = 3;

bool radial_direction(const ObjectState& o, const EgoPose& ego, bool inward, Vec2& dir) {
    Vec2 d{o.x - ego.x, o.y - ego.y};
    const double n = d.norm();
    if (n < kDegenerateDistance) return false;
    dir = d * (1.0 / n);
    if (inward) dir = dir * -1.0;
    return true;
}

}  // namespace

void InjectionConfig::validate() const {
    if (magnitude < 0.0) throw ConfigError("injection magnitude must be >= 0");
    if (rate < 0.0 || rate > 1.0) throw ConfigError("injection rate must be in [0, 1]");
    if (noise_sigma < 0.0) throw ConfigError("noise_sigma must be >= 0");
}

EgoTrajectory::EgoTrajectory(std::vector<EgoPose> poses) : poses_(std::move(poses)) {
    if (poses_.empty()) throw ConfigError("ego trajectory is empty");
}

const EgoPose& EgoTrajectory::at_frame(std::int64_t frame) const {
    // trajectories are contiguous in frame; fall back to search otherwise
    const std::int64_t offset = frame - poses_.front().frame;
    if (offset >= 0 && offset < static_cast<std::int64_t>(poses_.size()) &&
        poses_[offset].frame == frame) {
        return poses_[offset];
    }
    for (const EgoPose& p : poses_) {
        if (p.frame == frame) return p;
    }
    throw FrameMismatchError("no ego pose for frame " + std::to_string(frame));
}

InjectionResult inject_permanent_position(const std::vector<ObjectState>& stream,
                                          double magnitude, const EgoTrajectory& ego,
                                          bool inward) {
    InjectionResult res;
    res.stream = stream;
    for (ObjectState& o : res.stream) {
        Vec2 dir;
        if (!radial_direction(o, ego.at_frame(o.frame), inward, dir)) {
            std::cerr << "warning: object " << o.id << " at frame " << o.frame
                      << " coincides with the ego; shift skipped\n";
            ++res.skipped_degenerate;
            continue;
        }
        const Vec2 shift = dir * magnitude;
        o.x += shift.x;
        o.y += shift.y;
        InjectedError e;
        e.frame = o.frame;
        e.object_id = o.id;
        e.kind = ErrorKind::PositionPermanent;
        e.magnitude = magnitude;
        e.dx_applied = shift.x;
        e.dy_applied = shift.y;
        res.ledger.push_back(e);
    }
    return res;
}

InjectionResult inject_random_position(const std::vector<ObjectState>& stream,
                                       double magnitude, double rate,
                                       std::uint64_t seed, const EgoTrajectory& ego,
                                       bool inward) {
    if (rate < 0.0 || rate > 1.0) throw ConfigError("injection rate must be in [0, 1]");
    InjectionResult res;
    res.stream = stream;
    for (ObjectState& o : res.stream) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(o.frame),
                            static_cast<std::uint64_t>(o.id), kSaltRandomPosition);
        if (rng.uniform01() >= rate) continue;
        Vec2 dir;
        if (!radial_direction(o, ego.at_frame(o.frame), inward, dir)) {
            std::cerr << "warning: object " << o.id << " at frame " << o.frame
                      << " coincides with the ego; shift skipped\n";
            ++res.skipped_degenerate;
            continue;
        }
        const Vec2 shift = dir * magnitude;
        o.x += shift.x;
        o.y += shift.y;
        InjectedError e;
        e.frame = o.frame;
        e.object_id = o.id;
        e.kind = ErrorKind::PositionRandom;
        e.magnitude = magnitude;
        e.dx_applied = shift.x;
        e.dy_applied = shift.y;
        res.ledger.push_back(e);
    }
    return res;
}

InjectionResult inject_speed_error(const std::vector<ObjectState>& stream,
                                   double magnitude, SpeedErrorMode mode,
                                   double rate, std::uint64_t seed) {
    if (rate < 0.0 || rate > 1.0) throw ConfigError("injection rate must be in [0, 1]");
    InjectionResult res;
    res.stream = stream;
    for (ObjectState& o : res.stream) {
        if (mode == SpeedErrorMode::Transient) {
            Rng rng = substream(seed, static_cast<std::uint64_t>(o.frame),
                                static_cast<std::uint64_t>(o.id), kSaltTransientSpeed);
            if (rng.uniform01() >= rate) continue;
        }
        InjectedError e;
        e.frame = o.frame;
        e.object_id = o.id;
        e.kind = mode == SpeedErrorMode::Permanent ? ErrorKind::SpeedPermanent
                                                   : ErrorKind::SpeedTransient;
        e.magnitude = magnitude;
        double new_v = o.v + magnitude;
        if (new_v < 0.0) {
            new_v = 0.0;
            e.clamped = true;
        }
        e.dv_applied = new_v - o.v;
        o.v = new_v;
        res.ledger.push_back(e);
    }
    return res;
}

std::vector<ObjectState> add_gaussian_noise(const std::vector<ObjectState>& stream,
                                            double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw ConfigError("noise sigma must be >= 0");
    std::vector<ObjectState> out = stream;
    if (sigma == 0.0) return out;
    for (ObjectState& o : out) {
        Rng rng = substream(seed, static_cast<std::uint64_t>(o.frame),
                            static_cast<std::uint64_t>(o.id), kSaltNoise);
        o.x += rng.normal(0.0, sigma);
        o.y += rng.normal(0.0, sigma);
        o.dx += sigma;
        o.dy += sigma;
    }
    return out;
}

}  // namespace percmon
