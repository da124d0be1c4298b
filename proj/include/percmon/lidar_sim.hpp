#ifndef PERCMON_LIDAR_SIM_HPP_
#define PERCMON_LIDAR_SIM_HPP_

#include <cstdint>
#include <vector>

#include "percmon/types.hpp"

namespace percmon {

struct LidarConfig {
    double angular_resolution = 0.003490658503988659;  // 0.2 deg, radians
    double max_range = 50.0;                           // meters
    double range_noise_sigma = 0.02;                   // meters

    int ray_count() const;
    void validate() const;
};

/// Casts one full 360-degree scan from the ego position. Each ray returns the
/// nearest intersection with any object's true bounding box within max_range,
/// perturbed along the ray by N(0, sigma^2); rays without a hit emit nothing,
/// so occlusion is inherent. Range ties go to the lower object id.
PointCloud2D simulate_lidar(const std::vector<ObjectState>& objects_at_frame,
                            const EgoPose& ego, const LidarConfig& config,
                            std::uint64_t seed);

}  // namespace percmon

#endif  // PERCMON_LIDAR_SIM_HPP_
