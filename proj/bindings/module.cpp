#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "percmon/config.hpp"
#include "percmon/eval.hpp"
#include "percmon/fault_injection.hpp"
#include "percmon/io.hpp"
#include "percmon/lidar_sim.hpp"
#include "percmon/occupancy_grid.hpp"
#include "percmon/plausibility.hpp"
#include "percmon/scenario.hpp"
#include "percmon/sensor_checks.hpp"
#include "percmon/types.hpp"

namespace py = pybind11;
using namespace percmon;

PYBIND11_MODULE(_core, m) {
    m.doc() = "Perception-output runtime monitor: occupancy-grid sensor checks, "
              "motion plausibility checks, synthetic world and fault injection.";

    py::register_exception<ZeroIntervalError>(m, "ZeroIntervalError");
    py::register_exception<FrameMismatchError>(m, "FrameMismatchError");
    py::register_exception<ConfigError>(m, "ConfigError");
    py::register_exception<IoError>(m, "IoError");

    py::class_<Vec2>(m, "Vec2")
        .def(py::init<>())
        .def(py::init<double, double>())
        .def_readwrite("x", &Vec2::x)
        .def_readwrite("y", &Vec2::y)
        .def("norm", &Vec2::norm);

    py::class_<ObjectState>(m, "ObjectState")
        .def(py::init<>())
        .def_readwrite("id", &ObjectState::id)
        .def_readwrite("frame", &ObjectState::frame)
        .def_readwrite("t", &ObjectState::t)
        .def_readwrite("x", &ObjectState::x)
        .def_readwrite("y", &ObjectState::y)
        .def_readwrite("v", &ObjectState::v)
        .def_readwrite("theta", &ObjectState::theta)
        .def_readwrite("l", &ObjectState::l)
        .def_readwrite("w", &ObjectState::w)
        .def_readwrite("dx", &ObjectState::dx)
        .def_readwrite("dy", &ObjectState::dy)
        .def_readwrite("dv", &ObjectState::dv)
        .def_readwrite("dtheta", &ObjectState::dtheta)
        .def_readwrite("dl", &ObjectState::dl)
        .def_readwrite("dw", &ObjectState::dw);

    py::class_<EgoPose>(m, "EgoPose")
        .def(py::init<>())
        .def_readwrite("x", &EgoPose::x)
        .def_readwrite("y", &EgoPose::y)
        .def_readwrite("theta", &EgoPose::theta)
        .def_readwrite("frame", &EgoPose::frame)
        .def_readwrite("t", &EgoPose::t);

    py::class_<PointCloud2D>(m, "PointCloud2D")
        .def(py::init<>())
        .def_readwrite("frame", &PointCloud2D::frame)
        .def_readwrite("points", &PointCloud2D::points);

    py::enum_<ErrorKind>(m, "ErrorKind")
        .value("PositionPermanent", ErrorKind::PositionPermanent)
        .value("PositionRandom", ErrorKind::PositionRandom)
        .value("SpeedPermanent", ErrorKind::SpeedPermanent)
        .value("SpeedTransient", ErrorKind::SpeedTransient)
        .value("Noise", ErrorKind::Noise);

    py::class_<InjectedError>(m, "InjectedError")
        .def(py::init<>())
        .def_readwrite("frame", &InjectedError::frame)
        .def_readwrite("object_id", &InjectedError::object_id)
        .def_readwrite("kind", &InjectedError::kind)
        .def_readwrite("magnitude", &InjectedError::magnitude)
        .def_readwrite("dx_applied", &InjectedError::dx_applied)
        .def_readwrite("dy_applied", &InjectedError::dy_applied)
        .def_readwrite("dv_applied", &InjectedError::dv_applied)
        .def_readwrite("clamped", &InjectedError::clamped);

    py::class_<PolarVelocity>(m, "PolarVelocity")
        .def_readonly("v", &PolarVelocity::v)
        .def_readonly("theta", &PolarVelocity::theta);

    m.def("velocity_to_polar", &velocity_to_polar, py::arg("vx"), py::arg("vy"));
    m.def("polar_to_velocity", &polar_to_velocity, py::arg("v"), py::arg("theta"));
    m.def("normalize_angle", &normalize_angle, py::arg("theta"));

    py::class_<GridConfig>(m, "GridConfig")
        .def(py::init<>())
        .def_readwrite("extent", &GridConfig::extent)
        .def_readwrite("cell_size", &GridConfig::cell_size)
        .def_readwrite("saturation_count", &GridConfig::saturation_count);

    py::class_<OccupancyGrid>(m, "OccupancyGrid")
        .def_property_readonly("origin_x", &OccupancyGrid::origin_x)
        .def_property_readonly("origin_y", &OccupancyGrid::origin_y)
        .def_property_readonly("size", &OccupancyGrid::size)
        .def_property_readonly("dropped_points",
                               [](const OccupancyGrid& g) { return g.dropped_points; })
        .def(
            "at",
            [](const OccupancyGrid& g, int ix, int iy) {
                if (ix < 0 || iy < 0 || ix >= g.size() || iy >= g.size()) {
                    throw py::index_error("cell index out of range");
                }
                return g.at(ix, iy);
            },
            py::arg("ix"), py::arg("iy"))
        .def("occupied_cells", &OccupancyGrid::occupied_cells);

    m.def("build_grid", &build_grid, py::arg("cloud"), py::arg("ego"), py::arg("config"));
    m.def("occupancy_at", &occupancy_at, py::arg("grid"), py::arg("x"), py::arg("y"));

    py::class_<OrientedRegion>(m, "OrientedRegion")
        .def(py::init<>())
        .def_readwrite("cx", &OrientedRegion::cx)
        .def_readwrite("cy", &OrientedRegion::cy)
        .def_readwrite("half_length", &OrientedRegion::half_length)
        .def_readwrite("half_width", &OrientedRegion::half_width)
        .def_readwrite("theta", &OrientedRegion::theta)
        .def("contains", &OrientedRegion::contains)
        .def("boundary_distance", &OrientedRegion::boundary_distance);

    py::class_<SensorCheckParams>(m, "SensorCheckParams")
        .def(py::init<>())
        .def_readwrite("tau_tp", &SensorCheckParams::tau_tp)
        .def_readwrite("tau_fn", &SensorCheckParams::tau_fn)
        .def_readwrite("delta_safe", &SensorCheckParams::delta_safe)
        .def_readwrite("gamma_sens", &SensorCheckParams::gamma_sens)
        .def_readwrite("attr_radius", &SensorCheckParams::attr_radius);

    py::enum_<ObjectClass>(m, "ObjectClass")
        .value("TruePositive", ObjectClass::TruePositive)
        .value("FalsePositive", ObjectClass::FalsePositive);

    py::enum_<PositionErrorTrigger>(m, "PositionErrorTrigger")
        .value("NoTrigger", PositionErrorTrigger::None)
        .value("FalsePositive", PositionErrorTrigger::FalsePositive)
        .value("FnConflict", PositionErrorTrigger::FnConflict)
        .value("Both", PositionErrorTrigger::Both);

    py::class_<ObjectCheckResult>(m, "ObjectCheckResult")
        .def_readonly("object_id", &ObjectCheckResult::object_id)
        .def_readonly("eta", &ObjectCheckResult::eta)
        .def_readonly("classification", &ObjectCheckResult::classification)
        .def_readonly("position_error", &ObjectCheckResult::position_error)
        .def_readonly("trigger", &ObjectCheckResult::trigger)
        .def_readonly("attributed_fn_cells", &ObjectCheckResult::attributed_fn_cells);

    py::class_<ConflictCell>(m, "ConflictCell")
        .def_readonly("ix", &ConflictCell::ix)
        .def_readonly("iy", &ConflictCell::iy)
        .def_readonly("center_x", &ConflictCell::center_x)
        .def_readonly("center_y", &ConflictCell::center_y)
        .def_readonly("kappa", &ConflictCell::kappa);

    py::class_<SensorVerdict>(m, "SensorVerdict")
        .def_readonly("objects", &SensorVerdict::objects)
        .def_readonly("fn_cells", &SensorVerdict::fn_cells);

    m.def("object_region", &object_region, py::arg("object"), py::arg("params"));
    m.def("coverage", &coverage, py::arg("x"), py::arg("y"), py::arg("region"));
    m.def("consistency", &consistency, py::arg("grid"), py::arg("region"));
    m.def("conflict_map", &conflict_map, py::arg("grid"), py::arg("regions"));
    m.def("run_sensor_checks", &run_sensor_checks, py::arg("grid"), py::arg("objects"),
          py::arg("params"));
    m.def("min_detectable_position_error", &min_detectable_position_error,
          py::arg("params"), py::arg("grid_config"), py::arg("object"));

    py::class_<PlausibilityParams>(m, "PlausibilityParams")
        .def(py::init<>())
        .def_readwrite("a_acc", &PlausibilityParams::a_acc)
        .def_readwrite("a_br", &PlausibilityParams::a_br)
        .def_readwrite("omega_max", &PlausibilityParams::omega_max)
        .def_readwrite("dtheta_default", &PlausibilityParams::dtheta_default)
        .def_readwrite("gamma_plaus", &PlausibilityParams::gamma_plaus);

    py::class_<RateEstimate>(m, "RateEstimate")
        .def(py::init<>())
        .def_readwrite("omega_hat", &RateEstimate::omega_hat)
        .def_readwrite("a_hat", &RateEstimate::a_hat)
        .def_readwrite("d_omega", &RateEstimate::d_omega)
        .def_readwrite("d_a", &RateEstimate::d_a);

    py::enum_<Violation>(m, "Violation")
        .value("TurnRate", Violation::TurnRate)
        .value("Acceleration", Violation::Acceleration)
        .value("PositionPrediction", Violation::PositionPrediction);

    py::class_<PlausibilityVerdict>(m, "PlausibilityVerdict")
        .def_readonly("object_id", &PlausibilityVerdict::object_id)
        .def_readonly("plausible", &PlausibilityVerdict::plausible)
        .def_readonly("violated", &PlausibilityVerdict::violated)
        .def_readonly("x_hat", &PlausibilityVerdict::x_hat)
        .def_readonly("y_hat", &PlausibilityVerdict::y_hat)
        .def_readonly("dx_hat", &PlausibilityVerdict::dx_hat)
        .def_readonly("dy_hat", &PlausibilityVerdict::dy_hat)
        .def_readonly("residual", &PlausibilityVerdict::residual);

    py::class_<Displacement>(m, "Displacement")
        .def_readonly("fx", &Displacement::fx)
        .def_readonly("fy", &Displacement::fy);

    py::class_<PositionPrediction>(m, "PositionPrediction")
        .def_readonly("x_hat", &PositionPrediction::x_hat)
        .def_readonly("y_hat", &PositionPrediction::y_hat)
        .def_readonly("dx_hat", &PositionPrediction::dx_hat)
        .def_readonly("dy_hat", &PositionPrediction::dy_hat);

    m.def("ctra_displacement", &ctra_displacement, py::arg("dt"), py::arg("v"),
          py::arg("theta"), py::arg("a"), py::arg("omega"));
    m.def("estimate_rates", &estimate_rates, py::arg("prev"), py::arg("curr"),
          py::arg("dt"));
    m.def("predict_position", &predict_position, py::arg("prev"), py::arg("estimate"),
          py::arg("dt"));
    m.def("check_plausibility", &check_plausibility, py::arg("prev"), py::arg("curr"),
          py::arg("params"));

    py::enum_<SpeedErrorKind>(m, "SpeedErrorKind")
        .value("Permanent", SpeedErrorKind::Permanent)
        .value("Transient", SpeedErrorKind::Transient);

    py::class_<SpeedErrorMargins>(m, "SpeedErrorMargins")
        .def(py::init<>())
        .def_readwrite("dx", &SpeedErrorMargins::dx)
        .def_readwrite("dy", &SpeedErrorMargins::dy)
        .def_readwrite("dv", &SpeedErrorMargins::dv)
        .def_readwrite("dtheta", &SpeedErrorMargins::dtheta);

    py::class_<SpeedErrorThreshold>(m, "SpeedErrorThreshold")
        .def_readonly("positive", &SpeedErrorThreshold::positive)
        .def_readonly("negative", &SpeedErrorThreshold::negative);

    m.def("min_detectable_speed_error", &min_detectable_speed_error, py::arg("v"),
          py::arg("dt"), py::arg("kind"), py::arg("margins"), py::arg("params"));
    m.def("transient_speed_error_closed_form", &transient_speed_error_closed_form,
          py::arg("dt"), py::arg("dv_margin"), py::arg("params"));

    py::class_<EgoTrajectory>(m, "EgoTrajectory")
        .def(py::init<std::vector<EgoPose>>())
        .def("at_frame", &EgoTrajectory::at_frame, py::arg("frame"));

    py::class_<InjectionResult>(m, "InjectionResult")
        .def_readonly("stream", &InjectionResult::stream)
        .def_readonly("ledger", &InjectionResult::ledger)
        .def_readonly("skipped_degenerate", &InjectionResult::skipped_degenerate);

    py::enum_<SpeedErrorMode>(m, "SpeedErrorMode")
        .value("Permanent", SpeedErrorMode::Permanent)
        .value("Transient", SpeedErrorMode::Transient);

    m.def("inject_permanent_position", &inject_permanent_position, py::arg("stream"),
          py::arg("magnitude"), py::arg("ego"), py::arg("inward") = false);
    m.def("inject_random_position", &inject_random_position, py::arg("stream"),
          py::arg("magnitude"), py::arg("rate"), py::arg("seed"), py::arg("ego"),
          py::arg("inward") = false);
    m.def("inject_speed_error", &inject_speed_error, py::arg("stream"),
          py::arg("magnitude"), py::arg("mode"), py::arg("rate"), py::arg("seed"));
    m.def("add_gaussian_noise", &add_gaussian_noise, py::arg("stream"), py::arg("sigma"),
          py::arg("seed"));

    py::enum_<ScenarioKind>(m, "ScenarioKind")
        .value("Pedestrian", ScenarioKind::Pedestrian)
        .value("Intersection", ScenarioKind::Intersection);

    py::class_<ScenarioConfig>(m, "ScenarioConfig")
        .def(py::init<>())
        .def_readwrite("kind", &ScenarioConfig::kind)
        .def_readwrite("n_pedestrians", &ScenarioConfig::n_pedestrians)
        .def_readwrite("n_vehicles", &ScenarioConfig::n_vehicles)
        .def_readwrite("duration", &ScenarioConfig::duration)
        .def_readwrite("frame_dt", &ScenarioConfig::frame_dt)
        .def_readwrite("area", &ScenarioConfig::area)
        .def_readwrite("seed", &ScenarioConfig::seed);

    py::class_<ScenarioResult>(m, "ScenarioResult")
        .def_readonly("objects", &ScenarioResult::objects)
        .def_readonly("ego", &ScenarioResult::ego);

    m.def("generate_scenario", &generate_scenario, py::arg("config"));

    py::class_<LidarConfig>(m, "LidarConfig")
        .def(py::init<>())
        .def_readwrite("angular_resolution", &LidarConfig::angular_resolution)
        .def_readwrite("max_range", &LidarConfig::max_range)
        .def_readwrite("range_noise_sigma", &LidarConfig::range_noise_sigma);

    m.def("simulate_lidar", &simulate_lidar, py::arg("objects_at_frame"), py::arg("ego"),
          py::arg("config"), py::arg("seed"));

    py::class_<MonitorParams>(m, "MonitorParams")
        .def(py::init<>())
        .def_readwrite("grid", &MonitorParams::grid)
        .def_readwrite("sensor", &MonitorParams::sensor)
        .def_readwrite("plausibility", &MonitorParams::plausibility);

    py::class_<Flag>(m, "Flag")
        .def(py::init<>())
        .def_readwrite("frame", &Flag::frame)
        .def_readwrite("object_id", &Flag::object_id);

    py::class_<MonitorRun>(m, "MonitorRun")
        .def_readonly("total_object_frames", &MonitorRun::total_object_frames)
        .def_readonly("evidence_object_frames", &MonitorRun::evidence_object_frames)
        .def_readonly("sensor_flags", &MonitorRun::sensor_flags)
        .def_readonly("sensor_flags_adjusted", &MonitorRun::sensor_flags_adjusted)
        .def_readonly("plausibility_flags", &MonitorRun::plausibility_flags)
        .def_readonly("combined_flags", &MonitorRun::combined_flags);

    m.def("run_monitor", &run_monitor, py::arg("gt_stream"), py::arg("injected_stream"),
          py::arg("clouds"), py::arg("ego"), py::arg("params"));

    py::class_<MatchResult>(m, "MatchResult")
        .def_readonly("tp", &MatchResult::tp)
        .def_readonly("fp", &MatchResult::fp)
        .def_readonly("fn", &MatchResult::fn);

    m.def("match_detections", &match_detections, py::arg("flags"), py::arg("ledger"),
          py::arg("window") = 2);

    py::class_<MetricsRow>(m, "MetricsRow")
        .def_readonly("scenario", &MetricsRow::scenario)
        .def_readonly("check", &MetricsRow::check)
        .def_readonly("error_kind", &MetricsRow::error_kind)
        .def_readonly("magnitude", &MetricsRow::magnitude)
        .def_readonly("rate", &MetricsRow::rate)
        .def_readonly("tp", &MetricsRow::tp)
        .def_readonly("fp", &MetricsRow::fp)
        .def_readonly("fn", &MetricsRow::fn)
        .def_readonly("precision", &MetricsRow::precision)
        .def_readonly("recall", &MetricsRow::recall)
        .def_readonly("false_alarm_rate", &MetricsRow::false_alarm_rate);

    m.def("score_run", &score_run, py::arg("scenario"), py::arg("error_kind"),
          py::arg("magnitude"), py::arg("rate"), py::arg("run"), py::arg("ledger"),
          py::arg("window") = 2);

    py::enum_<ExperimentKind>(m, "ExperimentKind")
        .value("Noise", ExperimentKind::Noise)
        .value("PositionPermanent", ExperimentKind::PositionPermanent)
        .value("PositionRandom", ExperimentKind::PositionRandom)
        .value("Speed", ExperimentKind::Speed);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("experiment", &SweepSpec::experiment)
        .def_readwrite("scenario", &SweepSpec::scenario)
        .def_readwrite("lidar", &SweepSpec::lidar)
        .def_readwrite("monitor", &SweepSpec::monitor)
        .def_readwrite("magnitudes", &SweepSpec::magnitudes)
        .def_readwrite("rates", &SweepSpec::rates)
        .def_readwrite("sigmas", &SweepSpec::sigmas)
        .def_readwrite("transient_rate", &SweepSpec::transient_rate)
        .def_readwrite("window", &SweepSpec::window);

    m.def("sweep", &sweep, py::arg("spec"));

    py::class_<LatencyRow>(m, "LatencyRow")
        .def_readonly("check", &LatencyRow::check)
        .def_readonly("mean_ms", &LatencyRow::mean_ms)
        .def_readonly("p50_ms", &LatencyRow::p50_ms)
        .def_readonly("p99_ms", &LatencyRow::p99_ms)
        .def_readonly("frames", &LatencyRow::frames);

    m.def("bench_latency", &bench_latency, py::arg("stream"), py::arg("clouds"),
          py::arg("ego"), py::arg("params"), py::arg("repetitions"));
    m.def("write_metrics_csv", &write_metrics_csv, py::arg("rows"), py::arg("path"));
    m.def("write_latency_csv", &write_latency_csv, py::arg("rows"), py::arg("path"));

    // file formats
    m.def("read_object_jsonl", &read_object_jsonl, py::arg("path"));
    m.def("write_object_jsonl", &write_object_jsonl, py::arg("stream"), py::arg("path"));
    m.def("read_ego_jsonl", &read_ego_jsonl, py::arg("path"));
    m.def("write_ego_jsonl", &write_ego_jsonl, py::arg("trajectory"), py::arg("path"));
    m.def("read_cloud_csv", &read_cloud_csv, py::arg("path"));
    m.def("write_cloud_csv", &write_cloud_csv, py::arg("clouds"), py::arg("path"));
    m.def("read_ledger_jsonl", &read_ledger_jsonl, py::arg("path"));
    m.def("write_ledger_jsonl", &write_ledger_jsonl, py::arg("ledger"), py::arg("path"));

    m.attr("__version__") = "0.1.0";
}
