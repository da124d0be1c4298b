#include "percmon/eval.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

#include "percmon/io.hpp"
#include "percmon/rng.hpp"

namespace percmon {

namespace {

using ordered_json = nlohmann::ordered_json;

constexpr double kEvidenceBoxPadding = 0.2;  // meters around the true box

std::map<std::int64_t, std::vector<ObjectState>> group_by_frame(
    const std::vector<ObjectState>& stream) {
    std::map<std::int64_t, std::vector<ObjectState>> out;
    for (const ObjectState& o : stream) out[o.frame].push_back(o);
    for (auto& [frame, objects] : out) {
        std::sort(objects.begin(), objects.end(),
                  [](const ObjectState& a, const ObjectState& b) { return a.id < b.id; });
    }
    return out;
}

void check_alignment(const std::map<std::int64_t, std::vector<ObjectState>>& gt,
                     const std::map<std::int64_t, std::vector<ObjectState>>& injected) {
    if (gt.size() != injected.size()) {
        throw FrameMismatchError("ground-truth and injected streams cover different frames");
    }
    auto it_gt = gt.begin();
    auto it_in = injected.begin();
    for (; it_gt != gt.end(); ++it_gt, ++it_in) {
        if (it_gt->first != it_in->first ||
            it_gt->second.size() != it_in->second.size()) {
            throw FrameMismatchError("stream mismatch at frame " +
                                     std::to_string(it_gt->first));
        }
        for (std::size_t i = 0; i < it_gt->second.size(); ++i) {
            if (it_gt->second[i].id != it_in->second[i].id) {
                throw FrameMismatchError("object-set mismatch at frame " +
                                         std::to_string(it_gt->first));
            }
        }
    }
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

const char* to_cstr(PositionErrorTrigger t) {
    switch (t) {
        case PositionErrorTrigger::None: return "none";
        case PositionErrorTrigger::FalsePositive: return "false_positive";
        case PositionErrorTrigger::FnConflict: return "fn_conflict";
        case PositionErrorTrigger::Both: return "both";
    }
    return "none";
}

const char* to_cstr(Violation v) {
    switch (v) {
        case Violation::TurnRate: return "turn_rate";
        case Violation::Acceleration: return "acceleration";
        case Violation::PositionPrediction: return "position_prediction";
    }
    return "unknown";
}

}  // namespace

MonitorRun run_monitor(const std::vector<ObjectState>& gt_stream,
                       const std::vector<ObjectState>& injected_stream,
                       const std::vector<PointCloud2D>& clouds,
                       const std::vector<EgoPose>& ego,
                       const MonitorParams& params) {
    params.grid.validate();
    params.sensor.validate();
    params.plausibility.validate();

    const auto gt_frames = group_by_frame(gt_stream);
    const auto in_frames = group_by_frame(injected_stream);
    check_alignment(gt_frames, in_frames);

    std::map<std::int64_t, const PointCloud2D*> cloud_by_frame;
    for (const PointCloud2D& c : clouds) cloud_by_frame[c.frame] = &c;
    std::map<std::int64_t, const EgoPose*> ego_by_frame;
    for (const EgoPose& e : ego) ego_by_frame[e.frame] = &e;

    MonitorRun run;
    const std::vector<ObjectState>* prev_objects = nullptr;
    std::int64_t prev_frame = -1;

    for (const auto& [frame, objects] : in_frames) {
        auto cloud_it = cloud_by_frame.find(frame);
        auto ego_it = ego_by_frame.find(frame);
        if (cloud_it == cloud_by_frame.end()) {
            throw FrameMismatchError("no point cloud for frame " + std::to_string(frame));
        }
        if (ego_it == ego_by_frame.end()) {
            throw FrameMismatchError("no ego pose for frame " + std::to_string(frame));
        }

        FrameVerdict verdict;
        verdict.frame = frame;

        const OccupancyGrid grid = build_grid(*cloud_it->second, *ego_it->second, params.grid);
        verdict.sensor = run_sensor_checks(grid, objects, params.sensor);

        // evidence tally against the ground-truth geometry: an object counts
        // as occluded (unverifiable) when no cell of its true footprint
        // reaches the consistency threshold, which covers both full
        // occlusion and the stray-points case of partial occlusion
        const std::vector<ObjectState>& gt_objects = gt_frames.at(frame);
        for (const ObjectState& g : gt_objects) {
            OrientedRegion box{g.x, g.y, g.l / 2.0 + kEvidenceBoxPadding,
                               g.w / 2.0 + kEvidenceBoxPadding, g.theta};
            int count = 0;
            for (const Vec2& p : cloud_it->second->points) {
                if (box.contains(p.x, p.y)) ++count;
            }
            verdict.evidence_points[g.id] = count;
            double max_p = 0.0;
            for (const CellRef& cell : cells_in_region(grid, box)) {
                max_p = std::max(max_p, cell.p);
            }
            if (max_p < params.sensor.tau_tp) run.occluded.insert({frame, g.id});
        }

        // plausibility needs the directly preceding frame
        if (prev_objects != nullptr && prev_frame + 1 == frame) {
            std::map<std::int64_t, const ObjectState*> prev_by_id;
            for (const ObjectState& p : *prev_objects) prev_by_id[p.id] = &p;
            for (const ObjectState& o : objects) {
                auto it = prev_by_id.find(o.id);
                if (it == prev_by_id.end()) continue;  // first frame: plausible
                verdict.plausibility.push_back(
                    check_plausibility(*it->second, o, params.plausibility));
            }
        }

        run.total_object_frames += static_cast<std::int64_t>(objects.size());
        for (const ObjectCheckResult& r : verdict.sensor.objects) {
            const bool verifiable = !run.occluded.count({frame, r.object_id});
            if (verifiable) ++run.evidence_object_frames;
            if (r.position_error) {
                run.sensor_flags.push_back({frame, r.object_id});
                if (verifiable) run.sensor_flags_adjusted.push_back({frame, r.object_id});
            }
        }
        for (const PlausibilityVerdict& r : verdict.plausibility) {
            if (!r.plausible) run.plausibility_flags.push_back({frame, r.object_id});
        }

        run.frames.push_back(std::move(verdict));
        prev_objects = &objects;
        prev_frame = frame;
    }

    std::set<Flag> combined(run.sensor_flags_adjusted.begin(),
                            run.sensor_flags_adjusted.end());
    combined.insert(run.plausibility_flags.begin(), run.plausibility_flags.end());
    run.combined_flags.assign(combined.begin(), combined.end());
    return run;
}

MatchResult match_detections(const std::vector<Flag>& flags,
                             const std::vector<InjectedError>& ledger, int window) {
    std::map<std::int64_t, std::vector<std::pair<std::int64_t, bool>>> entries;
    for (const InjectedError& e : ledger) {
        entries[e.object_id].push_back({e.frame, false});
    }
    for (auto& [id, list] : entries) {
        std::sort(list.begin(), list.end());
    }

    std::vector<Flag> sorted = flags;
    std::sort(sorted.begin(), sorted.end());

    MatchResult res;
    for (const Flag& f : sorted) {
        auto it = entries.find(f.object_id);
        bool matched = false;
        if (it != entries.end()) {
            for (auto& [entry_frame, consumed] : it->second) {
                if (consumed) continue;
                if (entry_frame > f.frame) break;
                if (f.frame - entry_frame <= window) {
                    consumed = true;
                    matched = true;
                    break;
                }
            }
        }
        if (matched) {
            ++res.tp;
        } else {
            ++res.fp;
        }
    }
    for (const auto& [id, list] : entries) {
        for (const auto& [frame, consumed] : list) {
            if (!consumed) ++res.fn;
        }
    }
    return res;
}

double safe_ratio(std::int64_t num, std::int64_t den) {
    if (den == 0) return 1.0;
    return static_cast<double>(num) / static_cast<double>(den);
}

std::vector<MetricsRow> score_run(const std::string& scenario, const std::string& error_kind,
                                  double magnitude, double rate, const MonitorRun& run,
                                  const std::vector<InjectedError>& ledger, int window) {
    std::vector<MetricsRow> rows;

    auto make_row = [&](const std::string& check, const std::vector<Flag>& flags,
                        const std::vector<InjectedError>& entries,
                        std::int64_t denominator) {
        const MatchResult m = match_detections(flags, entries, window);
        MetricsRow row;
        row.scenario = scenario;
        row.check = check;
        row.error_kind = error_kind;
        row.magnitude = magnitude;
        row.rate = rate;
        row.tp = m.tp;
        row.fp = m.fp;
        row.fn = m.fn;
        row.precision = safe_ratio(m.tp, m.tp + m.fp);
        row.recall = safe_ratio(m.tp, m.tp + m.fn);
        row.false_alarm_rate =
            denominator == 0 ? 0.0
                             : static_cast<double>(m.fp) / static_cast<double>(denominator);
        rows.push_back(row);
    };

    // Sensor flags on occluded (unverifiable) object-frames are tallied
    // separately and never scored; the raw row still counts occluded ledger
    // entries as misses, the adjusted row drops them from the denominator.
    make_row("sensor", run.sensor_flags_adjusted, ledger, run.total_object_frames);
    make_row("plausibility", run.plausibility_flags, ledger, run.total_object_frames);
    make_row("combined", run.combined_flags, ledger, run.total_object_frames);

    std::vector<InjectedError> visible;
    for (const InjectedError& e : ledger) {
        if (!run.occluded.count({e.frame, e.object_id})) visible.push_back(e);
    }
    make_row("sensor_adjusted", run.sensor_flags_adjusted, visible,
             run.evidence_object_frames);
    return rows;
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    if (s == "noise") return ExperimentKind::Noise;
    if (s == "position_permanent") return ExperimentKind::PositionPermanent;
    if (s == "position_random") return ExperimentKind::PositionRandom;
    if (s == "speed") return ExperimentKind::Speed;
    throw ConfigError("unknown experiment: " + s);
}

std::vector<MetricsRow> sweep(const SweepSpec& spec) {
    const ScenarioResult world = generate_scenario(spec.scenario);
    const auto by_frame = group_by_frame(world.objects);

    std::vector<PointCloud2D> clouds;
    clouds.reserve(world.ego.size());
    for (const EgoPose& e : world.ego) {
        auto it = by_frame.find(e.frame);
        static const std::vector<ObjectState> empty;
        clouds.push_back(simulate_lidar(it == by_frame.end() ? empty : it->second, e,
                                        spec.lidar, spec.scenario.seed));
    }

    const EgoTrajectory ego_traj(world.ego);
    const std::string scenario_name = to_string(spec.scenario.kind);
    std::vector<MetricsRow> rows;
    std::uint64_t run_index = 0;

    auto derive_seed = [&](std::uint64_t index) {
        std::uint64_t s = spec.scenario.seed ^ (0x51ed2701a3b5c937ULL + index);
        return splitmix64(s);
    };

    auto score = [&](const std::string& kind, double magnitude, double rate,
                     const std::vector<ObjectState>& injected,
                     const std::vector<InjectedError>& ledger) {
        const MonitorRun run =
            run_monitor(world.objects, injected, clouds, world.ego, spec.monitor);
        const auto batch =
            score_run(scenario_name, kind, magnitude, rate, run, ledger, spec.window);
        rows.insert(rows.end(), batch.begin(), batch.end());
    };

    switch (spec.experiment) {
        case ExperimentKind::Noise:
            for (double sigma : spec.sigmas) {
                const auto noisy =
                    add_gaussian_noise(world.objects, sigma, derive_seed(run_index++));
                score(to_string(ErrorKind::Noise), sigma, 0.0, noisy, {});
            }
            break;
        case ExperimentKind::PositionPermanent:
            for (double m : spec.magnitudes) {
                const auto res = inject_permanent_position(world.objects, m, ego_traj);
                score(to_string(ErrorKind::PositionPermanent), m, 1.0, res.stream,
                      res.ledger);
                ++run_index;
            }
            break;
        case ExperimentKind::PositionRandom:
            for (double rate : spec.rates) {
                for (double m : spec.magnitudes) {
                    const auto res = inject_random_position(
                        world.objects, m, rate, derive_seed(run_index++), ego_traj);
                    score(to_string(ErrorKind::PositionRandom), m, rate, res.stream,
                          res.ledger);
                }
            }
            break;
        case ExperimentKind::Speed:
            for (double m : spec.magnitudes) {
                const auto perm = inject_speed_error(world.objects, m,
                                                     SpeedErrorMode::Permanent, 1.0, 0);
                score(to_string(ErrorKind::SpeedPermanent), m, 0.0, perm.stream,
                      perm.ledger);
                const auto trans =
                    inject_speed_error(world.objects, m, SpeedErrorMode::Transient,
                                       spec.transient_rate, derive_seed(run_index++));
                score(to_string(ErrorKind::SpeedTransient), m, spec.transient_rate,
                      trans.stream, trans.ledger);
            }
            break;
    }
    return rows;
}

std::vector<LatencyRow> bench_latency(const std::vector<ObjectState>& stream,
                                      const std::vector<PointCloud2D>& clouds,
                                      const std::vector<EgoPose>& ego,
                                      const MonitorParams& params, int repetitions) {
    if (repetitions < 10) throw ConfigError("bench repetitions must be >= 10");
    const auto by_frame = group_by_frame(stream);
    std::map<std::int64_t, const PointCloud2D*> cloud_by_frame;
    for (const PointCloud2D& c : clouds) cloud_by_frame[c.frame] = &c;
    std::map<std::int64_t, const EgoPose*> ego_by_frame;
    for (const EgoPose& e : ego) ego_by_frame[e.frame] = &e;

    using clock = std::chrono::steady_clock;
    std::vector<double> grid_ms;
    std::vector<double> plaus_ms;

    volatile double sink = 0.0;  // keeps the timed work observable
    for (int rep = 0; rep < repetitions; ++rep) {
        const std::vector<ObjectState>* prev = nullptr;
        std::int64_t prev_frame = -1;
        for (const auto& [frame, objects] : by_frame) {
            auto cloud_it = cloud_by_frame.find(frame);
            auto ego_it = ego_by_frame.find(frame);
            if (cloud_it == cloud_by_frame.end() || ego_it == ego_by_frame.end()) {
                throw FrameMismatchError("bench input missing frame " +
                                         std::to_string(frame));
            }
            auto t0 = clock::now();
            const OccupancyGrid grid =
                build_grid(*cloud_it->second, *ego_it->second, params.grid);
            const SensorVerdict sv = run_sensor_checks(grid, objects, params.sensor);
            auto t1 = clock::now();
            for (const ObjectCheckResult& r : sv.objects) sink = sink + r.eta;
            grid_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());

            if (prev != nullptr && prev_frame + 1 == frame) {
                std::map<std::int64_t, const ObjectState*> prev_by_id;
                for (const ObjectState& p : *prev) prev_by_id[p.id] = &p;
                auto t2 = clock::now();
                for (const ObjectState& o : objects) {
                    auto it = prev_by_id.find(o.id);
                    if (it == prev_by_id.end()) continue;
                    const PlausibilityVerdict v =
                        check_plausibility(*it->second, o, params.plausibility);
                    sink = sink + v.residual;
                }
                auto t3 = clock::now();
                plaus_ms.push_back(
                    std::chrono::duration<double, std::milli>(t3 - t2).count());
            }
            prev = &objects;
            prev_frame = frame;
        }
    }

    auto summarize = [](const std::string& name, std::vector<double>& samples) {
        LatencyRow row;
        row.check = name;
        row.frames = static_cast<std::int64_t>(samples.size());
        if (samples.empty()) return row;
        double sum = 0.0;
        for (double s : samples) sum += s;
        row.mean_ms = sum / samples.size();
        std::sort(samples.begin(), samples.end());
        row.p50_ms = samples[samples.size() / 2];
        row.p99_ms = samples[std::min(samples.size() - 1,
                                      static_cast<std::size_t>(samples.size() * 0.99))];
        return row;
    };

    std::vector<LatencyRow> rows;
    rows.push_back(summarize("grid_sensor", grid_ms));
    rows.push_back(summarize("plausibility", plaus_ms));
    return rows;
}

void write_metrics_csv(const std::vector<MetricsRow>& rows, const std::string& path) {
    std::ostringstream buf;
    buf << "scenario,check,error_kind,magnitude,rate,tp,fp,fn,precision,recall,"
           "false_alarm_rate\n";
    for (const MetricsRow& r : rows) {
        buf << r.scenario << ',' << r.check << ',' << r.error_kind << ','
            << format_double(r.magnitude) << ',' << format_double(r.rate) << ','
            << r.tp << ',' << r.fp << ',' << r.fn << ',' << format_double(r.precision)
            << ',' << format_double(r.recall) << ','
            << format_double(r.false_alarm_rate) << '\n';
    }
    atomic_write_text(path, buf.str());
}

void write_latency_csv(const std::vector<LatencyRow>& rows, const std::string& path) {
    std::ostringstream buf;
    buf << "check,mean_ms,p50_ms,p99_ms,frames\n";
    for (const LatencyRow& r : rows) {
        buf << r.check << ',' << format_double(r.mean_ms) << ','
            << format_double(r.p50_ms) << ',' << format_double(r.p99_ms) << ','
            << r.frames << '\n';
    }
    atomic_write_text(path, buf.str());
}

void write_sensor_verdicts_jsonl(const MonitorRun& run, const std::string& path) {
    std::ostringstream buf;
    for (const FrameVerdict& fv : run.frames) {
        for (const ObjectCheckResult& r : fv.sensor.objects) {
            ordered_json j;
            j["frame"] = fv.frame;
            j["object_id"] = r.object_id;
            j["eta"] = r.eta;
            j["class"] = r.classification == ObjectClass::TruePositive ? "true_positive"
                                                                       : "false_positive";
            j["pos_error"] = r.position_error;
            j["trigger"] = to_cstr(r.trigger);
            buf << j.dump() << '\n';
        }
    }
    atomic_write_text(path, buf.str());
}

void write_fn_cells_jsonl(const MonitorRun& run, const std::string& path) {
    std::ostringstream buf;
    for (const FrameVerdict& fv : run.frames) {
        for (const ConflictCell& c : fv.sensor.fn_cells) {
            ordered_json j;
            j["frame"] = fv.frame;
            j["ix"] = c.ix;
            j["iy"] = c.iy;
            j["kappa"] = c.kappa;
            buf << j.dump() << '\n';
        }
    }
    atomic_write_text(path, buf.str());
}

void write_plausibility_verdicts_jsonl(const MonitorRun& run, const std::string& path) {
    std::ostringstream buf;
    for (const FrameVerdict& fv : run.frames) {
        for (const PlausibilityVerdict& v : fv.plausibility) {
            ordered_json j;
            j["frame"] = fv.frame;
            j["object_id"] = v.object_id;
            j["plausible"] = v.plausible;
            ordered_json violated = ordered_json::array();
            for (Violation viol : v.violated) violated.push_back(to_cstr(viol));
            j["violated"] = violated;
            j["residual"] = v.residual;
            j["x_hat"] = v.x_hat;
            j["y_hat"] = v.y_hat;
            j["dx_hat"] = v.dx_hat;
            j["dy_hat"] = v.dy_hat;
            buf << j.dump() << '\n';
        }
    }
    atomic_write_text(path, buf.str());
}

}  // namespace percmon
