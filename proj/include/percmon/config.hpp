#ifndef PERCMON_CONFIG_HPP_
#define PERCMON_CONFIG_HPP_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "percmon/eval.hpp"
#include "percmon/fault_injection.hpp"
#include "percmon/lidar_sim.hpp"
#include "percmon/occupancy_grid.hpp"
#include "percmon/plausibility.hpp"
#include "percmon/scenario.hpp"
#include "percmon/sensor_checks.hpp"

namespace percmon {

/// Run configuration with dotted keys (e.g. grid.cell_size=0.5). Values are
/// loaded from a flat key=value file ('#' starts a comment) and can be
/// overridden by key=value pairs from the command line. Unknown keys are
/// rejected.
struct RunConfig {
    ScenarioConfig scenario;
    LidarConfig lidar;
    GridConfig grid;
    SensorCheckParams sensor;
    PlausibilityParams plausibility;
    InjectionConfig injection;
    int window = 2;

    // sweep controls
    std::string sweep_experiment = "noise";
    std::vector<double> sweep_magnitudes{0.2, 0.4, 0.6, 0.8, 1.0};
    std::vector<double> sweep_rates{0.2, 0.5, 0.8};
    std::vector<double> sweep_sigmas{0.0, 0.1, 0.2, 0.3, 0.4};
    double sweep_transient_rate = 0.1;

    // bench controls
    int bench_repetitions = 20;
    int bench_points = 100000;
    int bench_objects = 30;
    int bench_frames = 10;

    std::uint64_t seed = 1;

    void apply(const std::string& key, const std::string& value);
    void apply_file(const std::string& path);
    void apply_overrides(const std::vector<std::string>& key_values);

    MonitorParams monitor_params() const { return {grid, sensor, plausibility}; }
    SweepSpec sweep_spec() const;
};

}  // namespace percmon

#endif  // PERCMON_CONFIG_HPP_
