#include "percmon/lidar_sim.hpp"

#include <cmath>
#include <limits>

#include "percmon/geometry.hpp"
#include "percmon/rng.hpp"

namespace percmon {

namespace {
constexpr double kRayTieTolerance = 1e-9;
constexpr std::uint64_t kSaltLidar = 4;
}

int LidarConfig::ray_count() const {
    return static_cast<int>(std::ceil(2.0 * M_PI / angular_resolution));
}

void LidarConfig::validate() const {
    if (angular_resolution <= 0.0) throw ConfigError("angular_resolution must be positive");
    if (max_range <= 0.0) throw ConfigError("max_range must be positive");
    if (range_noise_sigma < 0.0) throw ConfigError("range_noise_sigma must be >= 0");
}

PointCloud2D simulate_lidar(const std::vector<ObjectState>& objects_at_frame,
                            const EgoPose& ego, const LidarConfig& config,
                            std::uint64_t seed) {
    config.validate();
    PointCloud2D cloud;
    cloud.frame = ego.frame;
    if (objects_at_frame.empty()) return cloud;

    std::vector<OrientedRegion> boxes;
    boxes.reserve(objects_at_frame.size());
    for (const ObjectState& o : objects_at_frame) {
        boxes.push_back({o.x, o.y, o.l / 2.0, o.w / 2.0, o.theta});
    }

    const Vec2 origin{ego.x, ego.y};
    const int rays = config.ray_count();
    for (int k = 0; k < rays; ++k) {
        const double angle = -M_PI + k * config.angular_resolution;
        const Vec2 dir{std::cos(angle), std::sin(angle)};
        double best_t = std::numeric_limits<double>::infinity();
        std::int64_t best_id = std::numeric_limits<std::int64_t>::max();
        for (std::size_t i = 0; i < boxes.size(); ++i) {
            double t;
            if (!ray_region_intersection(origin, dir, boxes[i], config.max_range, t)) {
                continue;
            }
            if (t < best_t - kRayTieTolerance ||
                (t <= best_t + kRayTieTolerance && objects_at_frame[i].id < best_id)) {
                best_t = t;
                best_id = objects_at_frame[i].id;
            }
        }
        if (!std::isfinite(best_t)) continue;
        double range = best_t;
        if (config.range_noise_sigma > 0.0) {
            Rng rng = substream(seed, static_cast<std::uint64_t>(ego.frame),
                                static_cast<std::uint64_t>(k), kSaltLidar);
            range += rng.normal(0.0, config.range_noise_sigma);
        }
        cloud.points.push_back(origin + dir * range);
    }
    return cloud;
}

}  // namespace percmon
