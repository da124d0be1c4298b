#include "percmon/scenario.hpp"

#include <algorithm>
#include <cmath>

#include "percmon/rng.hpp"

namespace percmon {

namespace {

// margins reported with every ground-truth state
constexpr double kPosMargin = 0.05;    // meters
constexpr double kSpeedMargin = 1.0;   // m/s
constexpr double kHeadingMargin = 0.0; // 0 = monitor default applies
constexpr double kDimMargin = 0.0;

constexpr double kPedestrianSize = 0.5;
constexpr double kVehicleLength = 4.5;
constexpr double kVehicleWidth = 2.0;

struct Pedestrian {
    std::int64_t id = 0;
    Vec2 pos;
    double speed = 1.0;
    double heading = 0.0;
    double turn_rate_limit = 1.0;  // rad/s
    Vec2 waypoint;
    double home_side = 1.0;   // which sign of x the pedestrian keeps
    double cross_side = 1.0;  // current y side being walked toward
};

ObjectState make_state(std::int64_t id, std::int64_t frame, double t, const Vec2& p,
                       double v, double heading, double l, double w) {
    ObjectState o;
    o.id = id;
    o.frame = frame;
    o.t = t;
    o.x = p.x;
    o.y = p.y;
    o.v = v;
    o.theta = normalize_angle(heading);
    o.l = l;
    o.w = w;
    o.dx = kPosMargin;
    o.dy = kPosMargin;
    o.dv = kSpeedMargin;
    o.dtheta = kHeadingMargin;
    o.dl = kDimMargin;
    o.dw = kDimMargin;
    return o;
}

Vec2 heading_vec(double theta) { return {std::cos(theta), std::sin(theta)}; }

void pick_crossing_target(Pedestrian& ped, Rng& rng) {
    ped.cross_side = -ped.cross_side;
    ped.waypoint.x = ped.home_side * rng.uniform(4.0, 15.0);
    ped.waypoint.y = ped.cross_side * rng.uniform(6.0, 16.0);
}

Pedestrian spawn_pedestrian(std::int64_t id, Rng& rng) {
    Pedestrian ped;
    ped.id = id;
    ped.home_side = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    ped.cross_side = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    ped.pos.x = ped.home_side * rng.uniform(4.0, 15.0);
    ped.pos.y = ped.cross_side * rng.uniform(6.0, 16.0);
    ped.speed = rng.uniform(0.5, 2.0);
    ped.turn_rate_limit = rng.uniform(0.8, 1.5);
    pick_crossing_target(ped, rng);
    ped.heading = std::atan2(ped.waypoint.y - ped.pos.y, ped.waypoint.x - ped.pos.x);
    return ped;
}

/// Advances one frame: the emitted heading is the direction of the upcoming
/// step, so consecutive states are exactly consistent on straight legs.
void step_pedestrian(Pedestrian& ped, double dt, Rng& rng) {
    ped.pos = ped.pos + heading_vec(ped.heading) * (ped.speed * dt);
    const double reach = std::max(1.2 * ped.speed / ped.turn_rate_limit, 0.5);
    if ((ped.waypoint - ped.pos).norm() <= reach) {
        pick_crossing_target(ped, rng);
    }
    const double bearing =
        std::atan2(ped.waypoint.y - ped.pos.y, ped.waypoint.x - ped.pos.x);
    const double max_delta = ped.turn_rate_limit * dt;
    const double delta =
        std::clamp(normalize_angle(bearing - ped.heading), -max_delta, max_delta);
    ped.heading = normalize_angle(ped.heading + delta);
}

enum class VehiclePhase { Approach, Decelerate, Turn, Exit };

struct Vehicle {
    std::int64_t id = 0;
    int spawn_frame = 0;
    Vec2 pos;
    double speed = 8.0;
    double heading = 0.0;
    VehiclePhase phase = VehiclePhase::Approach;
    double turn_omega = 0.0;   // 0 for straight-through
    double turn_speed = 5.0;
    double exit_speed = 8.0;
    double turned = 0.0;       // accumulated turn angle
    double turn_entry_dist = 0.0;  // distance from the crossing center
    bool alive = false;
};

Vehicle spawn_vehicle(std::int64_t id, int spawn_frame, Rng& rng) {
    Vehicle veh;
    veh.id = id;
    veh.spawn_frame = spawn_frame;
    const int arm = static_cast<int>(rng.next_u64() % 4);
    const double arm_angle = arm * M_PI / 2.0;  // direction from center to spawn
    const Vec2 out = heading_vec(arm_angle);
    const double dist = rng.uniform(24.0, 40.0);
    veh.pos = out * dist;
    veh.heading = normalize_angle(arm_angle + M_PI);  // toward the center
    veh.speed = rng.uniform(5.0, 10.0);
    veh.turn_speed = rng.uniform(3.0, 6.0);
    veh.exit_speed = rng.uniform(6.0, 10.0);
    const double maneuver = rng.uniform01();
    if (maneuver < 1.0 / 3.0) {
        veh.turn_omega = 0.0;  // straight through
    } else {
        const double radius = rng.uniform(6.0, 12.0);
        const double sign = maneuver < 2.0 / 3.0 ? 1.0 : -1.0;
        veh.turn_omega = sign * veh.turn_speed / radius;
        veh.turn_entry_dist = radius;
    }
    veh.alive = true;
    return veh;
}

/// Exact constant-turn-rate-and-acceleration step over one frame.
void ctra_exact_step(Vec2& pos, double& speed, double& heading, double a,
                     double omega, double dt) {
    const double v = speed;
    const double th = heading;
    const double v1 = std::max(0.0, v + a * dt);
    if (std::abs(omega) > 1e-9) {
        const double th1 = th + omega * dt;
        const double w = omega;
        pos.x += ((v + a * dt) * w * std::sin(th1) + a * std::cos(th1) -
                  v * w * std::sin(th) - a * std::cos(th)) / (w * w);
        pos.y += (-(v + a * dt) * w * std::cos(th1) - a * std::sin(th1) +
                  v * w * std::cos(th) + a * std::sin(th)) / (w * w);
        heading = normalize_angle(th1);
    } else {
        const double s = v * dt + a * dt * dt / 2.0;
        pos.x += s * std::cos(th);
        pos.y += s * std::sin(th);
    }
    speed = v1;
}

/// Per-frame vehicle controller; accelerations and turn rates are constant
/// within a frame so every state pair is an exact model step.
void step_vehicle(Vehicle& veh, double dt, double bound) {
    double a = 0.0;
    double omega = 0.0;
    const double dist_to_center = veh.pos.norm();
    const double decel = 2.0;
    switch (veh.phase) {
        case VehiclePhase::Approach: {
            const double brake_dist =
                (veh.speed * veh.speed - veh.turn_speed * veh.turn_speed) / (2.0 * decel);
            if (veh.turn_omega != 0.0 &&
                dist_to_center <= veh.turn_entry_dist + std::max(brake_dist, 0.0) + 1.0) {
                veh.phase = VehiclePhase::Decelerate;
            }
            break;
        }
        case VehiclePhase::Decelerate:
            if (veh.speed > veh.turn_speed + 1e-9) {
                a = std::max(-decel, (veh.turn_speed - veh.speed) / dt);
            }
            if (dist_to_center <= veh.turn_entry_dist + veh.speed * dt) {
                veh.phase = VehiclePhase::Turn;
            }
            break;
        case VehiclePhase::Turn:
            omega = veh.turn_omega;
            if (std::abs(veh.turned) >= M_PI / 2.0) {
                veh.phase = VehiclePhase::Exit;
                omega = 0.0;
            }
            break;
        case VehiclePhase::Exit:
            if (veh.speed < veh.exit_speed - 1e-9) {
                a = std::min(1.5, (veh.exit_speed - veh.speed) / dt);
            }
            break;
    }
    ctra_exact_step(veh.pos, veh.speed, veh.heading, a, omega, dt);
    if (omega != 0.0) veh.turned += omega * dt;
    if (std::abs(veh.pos.x) > bound || std::abs(veh.pos.y) > bound) {
        veh.alive = false;
    }
}

EgoPose make_ego(std::int64_t frame, double t, const Vec2& p, double heading) {
    EgoPose e;
    e.frame = frame;
    e.t = t;
    e.x = p.x;
    e.y = p.y;
    e.theta = normalize_angle(heading);
    return e;
}

}  // namespace

ScenarioKind scenario_kind_from_string(const std::string& s) {
    if (s == "pedestrian") return ScenarioKind::Pedestrian;
    if (s == "intersection") return ScenarioKind::Intersection;
    throw ConfigError("unknown scenario kind: " + s);
}

std::string to_string(ScenarioKind kind) {
    return kind == ScenarioKind::Pedestrian ? "pedestrian" : "intersection";
}

void ScenarioConfig::validate() const {
    if (frame_dt <= 0.0) throw ConfigError("frame_dt must be positive");
    if (duration <= 0.0) throw ConfigError("duration must be positive");
    if (area <= 0.0) throw ConfigError("area must be positive");
    if (n_pedestrians < 0 || n_vehicles < 0) {
        throw ConfigError("object counts must be >= 0");
    }
}

ScenarioResult generate_scenario(const ScenarioConfig& config) {
    config.validate();
    ScenarioResult result;
    const int frames = config.frame_count();
    const double dt = config.frame_dt;
    const double bound = config.area / 2.0 - 5.0;

    Rng rng(config.seed);

    std::vector<Pedestrian> pedestrians;
    for (int i = 0; i < config.n_pedestrians; ++i) {
        pedestrians.push_back(spawn_pedestrian(i + 1, rng));
    }

    std::vector<Vehicle> vehicles;
    if (config.kind == ScenarioKind::Intersection) {
        const int spawn_spacing = std::max(1, static_cast<int>(1.5 / dt));
        for (int i = 0; i < config.n_vehicles; ++i) {
            vehicles.push_back(spawn_vehicle(100 + i, i * spawn_spacing, rng));
        }
    }

    // intersection ego: approach from the south, slow through the crossing
    Vec2 ego_pos{0.0, -28.0};
    double ego_speed = 6.0;
    const double ego_heading = M_PI / 2.0;

    for (int frame = 0; frame < frames; ++frame) {
        const double t = frame * dt;

        if (config.kind == ScenarioKind::Pedestrian) {
            result.ego.push_back(make_ego(frame, t, {0.0, 0.0}, M_PI / 2.0));
        } else {
            // approach at 6 m/s, creep through the crossing at 3 m/s, pull
            // over shortly after so long runs stay inside the playing area
            result.ego.push_back(make_ego(frame, t, ego_pos, ego_heading));
            double a = 0.0;
            if (ego_pos.y > -14.0 && ego_pos.y < 6.0 && ego_speed > 3.0) {
                a = std::max(-1.5, (3.0 - ego_speed) / dt);
            } else if (ego_pos.y >= 14.0 && ego_speed > 0.0) {
                a = std::max(-1.5, -ego_speed / dt);
            }
            ego_pos.y += ego_speed * dt + a * dt * dt / 2.0;
            ego_speed = std::max(0.0, ego_speed + a * dt);
        }

        for (Pedestrian& ped : pedestrians) {
            result.objects.push_back(make_state(ped.id, frame, t, ped.pos, ped.speed,
                                                ped.heading, kPedestrianSize,
                                                kPedestrianSize));
            step_pedestrian(ped, dt, rng);
        }
        for (Vehicle& veh : vehicles) {
            if (!veh.alive || frame < veh.spawn_frame) continue;
            result.objects.push_back(make_state(veh.id, frame, t, veh.pos, veh.speed,
                                                veh.heading, kVehicleLength,
                                                kVehicleWidth));
            step_vehicle(veh, dt, bound);
        }
    }

    std::stable_sort(result.objects.begin(), result.objects.end(),
                     [](const ObjectState& a, const ObjectState& b) {
                         return a.frame != b.frame ? a.frame < b.frame : a.id < b.id;
                     });
    return result;
}

}  // namespace percmon
