#ifndef PERCMON_EVAL_HPP_
#define PERCMON_EVAL_HPP_

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "percmon/fault_injection.hpp"
#include "percmon/lidar_sim.hpp"
#include "percmon/occupancy_grid.hpp"
#include "percmon/plausibility.hpp"
#include "percmon/scenario.hpp"
#include "percmon/sensor_checks.hpp"
#include "percmon/types.hpp"

namespace percmon {

struct MonitorParams {
    GridConfig grid;
    SensorCheckParams sensor;
    PlausibilityParams plausibility;
};

/// (frame, object_id) of one raised check.
struct Flag {
    std::int64_t frame = 0;
    std::int64_t object_id = 0;

    bool operator<(const Flag& o) const {
        return frame != o.frame ? frame < o.frame : object_id < o.object_id;
    }
    bool operator==(const Flag& o) const {
        return frame == o.frame && object_id == o.object_id;
    }
};

struct FrameVerdict {
    std::int64_t frame = 0;
    SensorVerdict sensor;
    std::vector<PlausibilityVerdict> plausibility;
    std::map<std::int64_t, int> evidence_points;  // per object id, from ground truth
};

struct MonitorRun {
    std::vector<FrameVerdict> frames;
    std::int64_t total_object_frames = 0;
    std::int64_t evidence_object_frames = 0;  // object-frames with LiDAR evidence
    std::vector<Flag> sensor_flags;           // every position-error flag
    std::vector<Flag> sensor_flags_adjusted;  // flags on verifiable frames only;
                                              // this is the scored set
    std::vector<Flag> plausibility_flags;
    std::vector<Flag> combined_flags;  // scored sensor flags united with plausibility
    // object-frames whose true footprint has no cell at or above tau_tp
    // (fully or partially occluded; the sensor check cannot verify them)
    std::set<Flag> occluded;
};

/// Runs both checks over a frame-aligned pair of streams. The ground-truth
/// stream is used only to count per-object LiDAR evidence (occlusion tally);
/// the checks consume the injected stream and the point clouds. Throws
/// FrameMismatchError when the streams disagree on frames or object sets.
MonitorRun run_monitor(const std::vector<ObjectState>& gt_stream,
                       const std::vector<ObjectState>& injected_stream,
                       const std::vector<PointCloud2D>& clouds,
                       const std::vector<EgoPose>& ego,
                       const MonitorParams& params);

struct MatchResult {
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
};

/// Greedy windowed matching: each flag consumes the earliest unconsumed
/// ledger entry of the same object within `window` frames before the flag;
/// leftover flags are false positives, leftover entries false negatives.
MatchResult match_detections(const std::vector<Flag>& flags,
                             const std::vector<InjectedError>& ledger,
                             int window = 2);

struct MetricsRow {
    std::string scenario;
    std::string check;       // sensor | plausibility | combined | sensor_adjusted
    std::string error_kind;
    double magnitude = 0.0;
    double rate = 0.0;
    std::int64_t tp = 0;
    std::int64_t fp = 0;
    std::int64_t fn = 0;
    double precision = 1.0;
    double recall = 1.0;
    double false_alarm_rate = 0.0;
};

/// Ratio helpers with the 0/0 -> 1 convention.
double safe_ratio(std::int64_t num, std::int64_t den);

/// Scores one monitor run against a ledger: four rows (sensor, plausibility,
/// combined, sensor_adjusted). The adjusted row excludes ledger entries and
/// flags on object-frames without LiDAR evidence.
std::vector<MetricsRow> score_run(const std::string& scenario, const std::string& error_kind,
                                  double magnitude, double rate, const MonitorRun& run,
                                  const std::vector<InjectedError>& ledger,
                                  int window = 2);

enum class ExperimentKind { Noise, PositionPermanent, PositionRandom, Speed };

ExperimentKind experiment_kind_from_string(const std::string& s);

struct SweepSpec {
    ExperimentKind experiment = ExperimentKind::Noise;
    ScenarioConfig scenario;
    LidarConfig lidar;
    MonitorParams monitor;
    std::vector<double> magnitudes;  // meters or m/s
    std::vector<double> rates;       // random kinds
    std::vector<double> sigmas;      // noise sweep
    double transient_rate = 0.1;     // speed experiment
    int window = 2;
};

/// Runs the experiment grid: the scenario and clouds are generated once, each
/// grid point injects on a fresh copy with a derived seed and is scored per
/// check. Deterministic under the scenario seed.
std::vector<MetricsRow> sweep(const SweepSpec& spec);

struct LatencyRow {
    std::string check;  // grid_sensor | plausibility
    double mean_ms = 0.0;
    double p50_ms = 0.0;
    double p99_ms = 0.0;
    std::int64_t frames = 0;
};

/// Wall-clock per-frame latency of grid build + sensor checks and of the
/// plausibility checks, excluding I/O, single-threaded.
std::vector<LatencyRow> bench_latency(const std::vector<ObjectState>& stream,
                                      const std::vector<PointCloud2D>& clouds,
                                      const std::vector<EgoPose>& ego,
                                      const MonitorParams& params, int repetitions);

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path);
void write_latency_csv(const std::vector<LatencyRow>& rows, const std::string& path);

/// Verdict dumps (JSON-lines).
void write_sensor_verdicts_jsonl(const MonitorRun& run, const std::string& path);
void write_fn_cells_jsonl(const MonitorRun& run, const std::string& path);
void write_plausibility_verdicts_jsonl(const MonitorRun& run, const std::string& path);

}  // namespace percmon

#endif  // PERCMON_EVAL_HPP_
