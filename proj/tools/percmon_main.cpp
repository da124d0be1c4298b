#include <cstdint>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "percmon/config.hpp"
#include "percmon/eval.hpp"
#include "percmon/io.hpp"
#include "percmon/rng.hpp"

namespace fs = std::filesystem;
using namespace percmon;

namespace {

struct CommonArgs {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_dir = ".";
    std::int64_t seed = -1;
};

RunConfig load_config(const CommonArgs& args) {
    RunConfig cfg;
    if (!args.config_path.empty()) cfg.apply_file(args.config_path);
    cfg.apply_overrides(args.overrides);
    if (args.seed >= 0) {
        cfg.seed = static_cast<std::uint64_t>(args.seed);
        cfg.scenario.seed = cfg.seed;
        cfg.injection.seed = cfg.seed;
    }
    return cfg;
}

std::string out_path(const CommonArgs& args, const std::string& name) {
    fs::create_directories(args.out_dir);
    return (fs::path(args.out_dir) / name).string();
}

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value config file");
    cmd->add_option("--set", args.overrides, "config override key=value")
        ->take_all();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--seed", args.seed, "random seed (overrides config)");
}

void cmd_scenario(const CommonArgs& args, const std::string& objects_name,
                  const std::string& ego_name) {
    const RunConfig cfg = load_config(args);
    const ScenarioResult world = generate_scenario(cfg.scenario);
    write_object_jsonl(world.objects, out_path(args, objects_name));
    write_ego_jsonl(world.ego, out_path(args, ego_name));
    std::cout << "scenario: " << world.objects.size() << " object states, "
              << world.ego.size() << " frames\n";
}

void cmd_lidar(const CommonArgs& args, const std::string& objects_path,
               const std::string& ego_path, const std::string& cloud_name) {
    const RunConfig cfg = load_config(args);
    const auto objects = read_object_jsonl(objects_path);
    const auto ego = read_ego_jsonl(ego_path);
    std::map<std::int64_t, std::vector<ObjectState>> by_frame;
    for (const ObjectState& o : objects) by_frame[o.frame].push_back(o);
    std::vector<PointCloud2D> clouds;
    clouds.reserve(ego.size());
    std::size_t total = 0;
    for (const EgoPose& e : ego) {
        static const std::vector<ObjectState> empty;
        auto it = by_frame.find(e.frame);
        clouds.push_back(simulate_lidar(it == by_frame.end() ? empty : it->second, e,
                                        cfg.lidar, cfg.seed));
        total += clouds.back().points.size();
    }
    write_cloud_csv(clouds, out_path(args, cloud_name));
    std::cout << "lidar: " << total << " points over " << clouds.size() << " frames\n";
}

void cmd_inject(const CommonArgs& args, const std::string& objects_path,
                const std::string& ego_path, const std::string& injected_name,
                const std::string& ledger_name) {
    const RunConfig cfg = load_config(args);
    cfg.injection.validate();
    const auto stream = read_object_jsonl(objects_path);

    InjectionResult res;
    switch (cfg.injection.kind) {
        case ErrorKind::PositionPermanent: {
            const EgoTrajectory ego(read_ego_jsonl(ego_path));
            res = inject_permanent_position(stream, cfg.injection.magnitude, ego,
                                            cfg.injection.inward);
            break;
        }
        case ErrorKind::PositionRandom: {
            const EgoTrajectory ego(read_ego_jsonl(ego_path));
            res = inject_random_position(stream, cfg.injection.magnitude,
                                         cfg.injection.rate, cfg.injection.seed, ego,
                                         cfg.injection.inward);
            break;
        }
        case ErrorKind::SpeedPermanent:
            res = inject_speed_error(stream, cfg.injection.magnitude,
                                     SpeedErrorMode::Permanent, 1.0, cfg.injection.seed);
            break;
        case ErrorKind::SpeedTransient:
            res = inject_speed_error(stream, cfg.injection.magnitude,
                                     SpeedErrorMode::Transient, cfg.injection.rate,
                                     cfg.injection.seed);
            break;
        case ErrorKind::Noise:
            res.stream = add_gaussian_noise(stream, cfg.injection.noise_sigma, cfg.injection.seed);
            break;
    }
    write_object_jsonl(res.stream, out_path(args, injected_name));
    write_ledger_jsonl(res.ledger, out_path(args, ledger_name));
    std::cout << "inject: " << res.ledger.size() << " ledger entries\n";
}

void cmd_monitor(const CommonArgs& args, const std::string& objects_path,
                 const std::string& gt_path, const std::string& clouds_path,
                 const std::string& ego_path, std::int64_t dump_grid_frame) {
    const RunConfig cfg = load_config(args);
    const auto objects = read_object_jsonl(objects_path);
    const auto gt = gt_path.empty() ? objects : read_object_jsonl(gt_path);
    const auto clouds = read_cloud_csv(clouds_path);
    const auto ego = read_ego_jsonl(ego_path);
    const MonitorRun run = run_monitor(gt, objects, clouds, ego, cfg.monitor_params());
    write_sensor_verdicts_jsonl(run, out_path(args, "sensor_verdicts.jsonl"));
    write_fn_cells_jsonl(run, out_path(args, "fn_cells.jsonl"));
    write_plausibility_verdicts_jsonl(run, out_path(args, "plausibility_verdicts.jsonl"));
    if (dump_grid_frame >= 0) {
        const PointCloud2D* cloud = nullptr;
        const EgoPose* pose = nullptr;
        for (const PointCloud2D& c : clouds) {
            if (c.frame == dump_grid_frame) cloud = &c;
        }
        for (const EgoPose& e : ego) {
            if (e.frame == dump_grid_frame) pose = &e;
        }
        if (cloud == nullptr || pose == nullptr) {
            throw FrameMismatchError("no data for grid dump frame " +
                                     std::to_string(dump_grid_frame));
        }
        const OccupancyGrid grid = build_grid(*cloud, *pose, cfg.grid);
        dump_grid_csv(grid, out_path(args, "grid_" + std::to_string(dump_grid_frame) +
                                               ".csv"));
    }
    std::cout << "monitor: " << run.sensor_flags.size() << " sensor flags, "
              << run.plausibility_flags.size() << " plausibility flags over "
              << run.total_object_frames << " object-frames\n";
}

void cmd_sweep(const CommonArgs& args, const std::string& metrics_name) {
    const RunConfig cfg = load_config(args);
    const auto rows = sweep(cfg.sweep_spec());
    write_metrics_csv(rows, out_path(args, metrics_name));
    std::cout << "sweep: " << rows.size() << " metric rows\n";
}

/// Deterministic synthetic load: constant-velocity objects and a uniform
/// point cloud of the requested size per frame.
void synthetic_bench_load(const RunConfig& cfg, std::vector<ObjectState>& stream,
                          std::vector<PointCloud2D>& clouds, std::vector<EgoPose>& ego) {
    Rng rng(cfg.seed ^ 0xbe9cUL);
    const double half = cfg.grid.extent / 2.0 - 5.0;
    struct Body { double x, y, vx, vy; };
    std::vector<Body> bodies;
    for (int i = 0; i < cfg.bench_objects; ++i) {
        bodies.push_back({rng.uniform(-half, half), rng.uniform(-half, half),
                          rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0)});
    }
    const double dt = 0.05;
    for (int f = 0; f < cfg.bench_frames; ++f) {
        EgoPose e;
        e.frame = f;
        e.t = f * dt;
        ego.push_back(e);
        PointCloud2D cloud;
        cloud.frame = f;
        for (int p = 0; p < cfg.bench_points; ++p) {
            cloud.points.push_back({rng.uniform(-half, half), rng.uniform(-half, half)});
        }
        clouds.push_back(std::move(cloud));
        for (int i = 0; i < cfg.bench_objects; ++i) {
            ObjectState o;
            o.id = i + 1;
            o.frame = f;
            o.t = f * dt;
            o.x = bodies[i].x + bodies[i].vx * f * dt;
            o.y = bodies[i].y + bodies[i].vy * f * dt;
            const PolarVelocity pv = velocity_to_polar(bodies[i].vx, bodies[i].vy);
            o.v = pv.v;
            o.theta = pv.theta;
            o.l = 4.5;
            o.w = 2.0;
            o.dx = o.dy = 0.05;
            o.dv = 1.0;
            stream.push_back(o);
        }
    }
}

void cmd_bench(const CommonArgs& args, const std::string& objects_path,
               const std::string& clouds_path, const std::string& ego_path,
               const std::string& latency_name) {
    const RunConfig cfg = load_config(args);
    std::vector<ObjectState> stream;
    std::vector<PointCloud2D> clouds;
    std::vector<EgoPose> ego;
    if (!objects_path.empty()) {
        stream = read_object_jsonl(objects_path);
        clouds = read_cloud_csv(clouds_path);
        ego = read_ego_jsonl(ego_path);
    } else {
        synthetic_bench_load(cfg, stream, clouds, ego);
    }
    const auto rows =
        bench_latency(stream, clouds, ego, cfg.monitor_params(), cfg.bench_repetitions);
    write_latency_csv(rows, out_path(args, latency_name));
    for (const LatencyRow& r : rows) {
        std::cout << "bench: " << r.check << " mean " << r.mean_ms << " ms (p99 "
                  << r.p99_ms << " ms, " << r.frames << " frames)\n";
    }
}

int error_exit(const std::string& code, const std::string& message) {
    nlohmann::ordered_json j;
    j["error"] = code;
    j["message"] = message;
    std::cerr << j.dump() << '\n';
    if (code == "ConfigError") return 2;
    if (code == "IoError") return 3;
    if (code == "FrameMismatch") return 4;
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"perception-output runtime monitor toolkit"};
    app.set_version_flag("--version", "percmon 0.1.0");
    app.require_subcommand(1);

    CommonArgs scenario_args, lidar_args, inject_args, monitor_args, sweep_args,
        bench_args;
    std::string objects_path, ego_path, clouds_path, gt_path;
    std::string objects_name = "objects.jsonl";
    std::string ego_name = "ego.jsonl";
    std::string cloud_name = "cloud.csv";
    std::string injected_name = "injected.jsonl";
    std::string ledger_name = "ledger.jsonl";
    std::string metrics_name = "metrics.csv";
    std::string latency_name = "latency.csv";

    auto* scenario_cmd =
        app.add_subcommand("scenario", "generate a ground-truth world");
    add_common(scenario_cmd, scenario_args);
    scenario_cmd->add_option("--out-objects", objects_name, "object stream file name");
    scenario_cmd->add_option("--out-ego", ego_name, "ego trajectory file name");

    auto* lidar_cmd = app.add_subcommand("lidar", "simulate LiDAR scans");
    add_common(lidar_cmd, lidar_args);
    lidar_cmd->add_option("--objects", objects_path, "object stream (jsonl)")->required();
    lidar_cmd->add_option("--ego", ego_path, "ego trajectory (jsonl)")->required();
    lidar_cmd->add_option("--out-cloud", cloud_name, "point cloud file name");

    auto* inject_cmd = app.add_subcommand("inject", "inject faults into a stream");
    add_common(inject_cmd, inject_args);
    inject_cmd->add_option("--objects", objects_path, "object stream (jsonl)")->required();
    inject_cmd->add_option("--ego", ego_path, "ego trajectory (jsonl)");
    inject_cmd->add_option("--out-objects", injected_name, "injected stream file name");
    inject_cmd->add_option("--out-ledger", ledger_name, "injection ledger file name");

    std::int64_t dump_grid_frame = -1;
    auto* monitor_cmd = app.add_subcommand("monitor", "run the checks over a stream");
    add_common(monitor_cmd, monitor_args);
    monitor_cmd->add_option("--objects", objects_path, "monitored stream (jsonl)")
        ->required();
    monitor_cmd->add_option("--gt", gt_path, "ground-truth stream for occlusion tally");
    monitor_cmd->add_option("--clouds", clouds_path, "point clouds (csv)")->required();
    monitor_cmd->add_option("--ego", ego_path, "ego trajectory (jsonl)")->required();
    monitor_cmd->add_option("--dump-grid", dump_grid_frame,
                            "also dump the occupancy grid of this frame as csv");

    auto* sweep_cmd = app.add_subcommand("sweep", "run an experiment grid");
    add_common(sweep_cmd, sweep_args);
    sweep_cmd->add_option("--out-metrics", metrics_name, "metrics csv file name");

    auto* bench_cmd = app.add_subcommand("bench", "measure per-frame check latency");
    add_common(bench_cmd, bench_args);
    bench_cmd->add_option("--objects", objects_path, "object stream (jsonl)");
    bench_cmd->add_option("--clouds", clouds_path, "point clouds (csv)");
    bench_cmd->add_option("--ego", ego_path, "ego trajectory (jsonl)");
    bench_cmd->add_option("--out-latency", latency_name, "latency csv file name");

    CLI11_PARSE(app, argc, argv);

    try {
        if (scenario_cmd->parsed()) {
            cmd_scenario(scenario_args, objects_name, ego_name);
        } else if (lidar_cmd->parsed()) {
            cmd_lidar(lidar_args, objects_path, ego_path, cloud_name);
        } else if (inject_cmd->parsed()) {
            cmd_inject(inject_args, objects_path, ego_path, injected_name, ledger_name);
        } else if (monitor_cmd->parsed()) {
            cmd_monitor(monitor_args, objects_path, gt_path, clouds_path, ego_path,
                        dump_grid_frame);
        } else if (sweep_cmd->parsed()) {
            cmd_sweep(sweep_args, metrics_name);
        } else if (bench_cmd->parsed()) {
            cmd_bench(bench_args, objects_path, clouds_path, ego_path, latency_name);
        }
    } catch (const ConfigError& e) {
        return error_exit("ConfigError", e.what());
    } catch (const IoError& e) {
        return error_exit("IoError", e.what());
    } catch (const FrameMismatchError& e) {
        return error_exit("FrameMismatch", e.what());
    } catch (const std::exception& e) {
        return error_exit("Error", e.what());
    }
    return 0;
}
