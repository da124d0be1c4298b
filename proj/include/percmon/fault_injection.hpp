#ifndef PERCMON_FAULT_INJECTION_HPP_
#define PERCMON_FAULT_INJECTION_HPP_

#include <cstdint>
#include <vector>

#include "percmon/types.hpp"

namespace percmon {

struct InjectionConfig {
    ErrorKind kind = ErrorKind::PositionPermanent;
    double magnitude = 0.0;   // meters or m/s depending on kind
    double rate = 0.1;        // per object per frame, random kinds only
    double noise_sigma = 0.0; // meters, Noise kind
    std::uint64_t seed = 0;
    bool inward = false;      // reverse the radial direction (test support)

    void validate() const;
};

struct InjectionResult {
    std::vector<ObjectState> stream;
    std::vector<InjectedError> ledger;
    std::size_t skipped_degenerate = 0;  // objects coinciding with the ego
};

/// Ego pose lookup by frame for radial shift directions.
class EgoTrajectory {
public:
    explicit EgoTrajectory(std::vector<EgoPose> poses);
    const EgoPose& at_frame(std::int64_t frame) const;
    const std::vector<EgoPose>& poses() const { return poses_; }

private:
    std::vector<EgoPose> poses_;
};

/// Shifts every object at every frame by `magnitude` along the ego-to-object
/// direction; one ledger entry per object-frame. Objects that coincide with
/// the ego position are skipped and counted.
InjectionResult inject_permanent_position(const std::vector<ObjectState>& stream,
                                          double magnitude, const EgoTrajectory& ego,
                                          bool inward = false);

/// Applies the radial shift to each object-frame independently with the given
/// probability; the ledger records only applied shifts.
InjectionResult inject_random_position(const std::vector<ObjectState>& stream,
                                       double magnitude, double rate,
                                       std::uint64_t seed, const EgoTrajectory& ego,
                                       bool inward = false);

enum class SpeedErrorMode { Permanent, Transient };

/// Adds `magnitude` to the reported speed: every frame for Permanent, or per
/// object-frame with probability `rate` for Transient. Positions are never
/// touched. Speeds that would go negative are clamped to 0 and the ledger
/// entry is marked clamped.
InjectionResult inject_speed_error(const std::vector<ObjectState>& stream,
                                   double magnitude, SpeedErrorMode mode,
                                   double rate, std::uint64_t seed);

/// Perturbs positions with independent N(0, sigma^2) per axis and widens the
/// position margins by sigma. Noise is not an error: no ledger is produced.
std::vector<ObjectState> add_gaussian_noise(const std::vector<ObjectState>& stream,
                                            double sigma, std::uint64_t seed);

}  // namespace percmon

#endif  // PERCMON_FAULT_INJECTION_HPP_
