#include <cmath>

#include <doctest.h>

#include "percmon/lidar_sim.hpp"
#include "percmon/occupancy_grid.hpp"
#include "percmon/rng.hpp"
#include "percmon/sensor_checks.hpp"

using namespace percmon;

namespace {

ObjectState make_object(double x, double y, double l, double w, double theta = 0.0) {
    ObjectState o;
    o.id = 1;
    o.x = x;
    o.y = y;
    o.l = l;
    o.w = w;
    o.theta = theta;
    return o;
}

OccupancyGrid empty_grid(double extent = 100.0, double cell = 0.5) {
    GridConfig cfg;
    cfg.extent = extent;
    cfg.cell_size = cell;
    PointCloud2D cloud;
    EgoPose ego;
    return build_grid(cloud, ego, cfg);
}

}  // namespace

TEST_CASE("object_region enlargement") {
    SensorCheckParams params;
    SUBCASE("zero margins and zero safety margin give the bounding box") {
        params.delta_safe = 0.0;
        const ObjectState o = make_object(1.0, 2.0, 4.0, 2.0, 0.3);
        const OrientedRegion r = object_region(o, params);
        CHECK(r.half_length == doctest::Approx(2.0));
        CHECK(r.half_width == doctest::Approx(1.0));
        CHECK(r.cx == doctest::Approx(1.0));
        CHECK(r.theta == doctest::Approx(0.3));
    }
    SUBCASE("margins scale with gamma_sens") {
        ObjectState o = make_object(0.0, 0.0, 4.0, 2.0);
        o.dx = o.dy = 0.1;
        const OrientedRegion r = object_region(o, params);
        CHECK(r.half_length == doctest::Approx(2.4));
        CHECK(r.half_width == doctest::Approx(1.4));
    }
    SUBCASE("rotating by pi leaves the covered point set unchanged") {
        ObjectState o = make_object(3.0, -2.0, 4.0, 2.0, 0.7);
        const OrientedRegion r1 = object_region(o, params);
        o.theta = normalize_angle(o.theta + M_PI);
        const OrientedRegion r2 = object_region(o, params);
        Rng rng(5);
        for (int i = 0; i < 200; ++i) {
            const double px = rng.uniform(-1.0, 7.0);
            const double py = rng.uniform(-6.0, 2.0);
            CHECK(r1.contains(px, py) == r2.contains(px, py));
        }
    }
}

TEST_CASE("coverage") {
    const OrientedRegion r{0.0, 0.0, 2.0, 1.0, 0.0};
    CHECK(coverage(0.0, 0.0, r) == 1);
    CHECK(coverage(3.0, 0.0, r) == 0);
    CHECK(coverage(2.0, 0.0, r) == 1);  // boundary is inside
    CHECK(coverage(2.0, 1.0, r) == 1);
}

TEST_CASE("consistency") {
    OccupancyGrid grid = empty_grid(20.0);
    const OrientedRegion region{1.0, 1.0, 1.0, 1.0, 0.0};
    SUBCASE("empty grid gives zero") { CHECK(consistency(grid, region) == 0.0); }
    SUBCASE("max over covered cells") {
        int ix, iy;
        REQUIRE(grid.cell_of(0.75, 0.75, ix, iy));
        grid.set(ix, iy, 0.3);
        REQUIRE(grid.cell_of(1.25, 1.25, ix, iy));
        grid.set(ix, iy, 0.9);
        CHECK(consistency(grid, region) == doctest::Approx(0.9));
    }
    SUBCASE("region outside the extent gives zero") {
        const OrientedRegion far{500.0, 0.0, 1.0, 1.0, 0.0};
        CHECK(consistency(grid, far) == 0.0);
    }
}

TEST_CASE("conflict_map") {
    OccupancyGrid grid = empty_grid(20.0);
    int ix, iy;
    REQUIRE(grid.cell_of(2.25, 2.25, ix, iy));
    grid.set(ix, iy, 0.9);
    grid.rebuild_occupied_index();

    SUBCASE("occupied cell outside all regions keeps its probability") {
        const auto conflicts = conflict_map(grid, {});
        REQUIRE(conflicts.size() == 1);
        CHECK(conflicts[0].kappa == doctest::Approx(0.9));
    }
    SUBCASE("covered occupied cell is silent") {
        const OrientedRegion region{2.25, 2.25, 1.0, 1.0, 0.0};
        CHECK(conflict_map(grid, {region}).empty());
    }
}

TEST_CASE("classification thresholds are strict per the decision functions") {
    SensorCheckParams params;
    const auto classes = classify_objects({0.79, 0.8, 1.0, 0.0}, params);
    CHECK(classes[0] == ObjectClass::FalsePositive);
    CHECK(classes[1] == ObjectClass::TruePositive);
    CHECK(classes[2] == ObjectClass::TruePositive);
    CHECK(classes[3] == ObjectClass::FalsePositive);

    std::vector<ConflictCell> conflicts{
        {0, 0, 0.0, 0.0, 0.81}, {0, 1, 0.0, 0.0, 0.8}, {0, 2, 0.0, 0.0, 0.0}};
    const auto fn = classify_cells(conflicts, params);
    REQUIRE(fn.size() == 1);
    CHECK(fn[0].kappa == doctest::Approx(0.81));
}

TEST_CASE("eta and kappa match a brute-force evaluation over all cells") {
    Rng rng(31);
    GridConfig cfg;
    cfg.extent = 30.0;
    cfg.cell_size = 0.5;
    for (int trial = 0; trial < 4; ++trial) {
        PointCloud2D cloud;
        for (int i = 0; i < 600; ++i) {
            cloud.points.push_back({rng.uniform(-14.0, 14.0), rng.uniform(-14.0, 14.0)});
        }
        EgoPose ego;
        const OccupancyGrid grid = build_grid(cloud, ego, cfg);

        std::vector<OrientedRegion> regions;
        for (int i = 0; i < 4; ++i) {
            regions.push_back({rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0),
                               rng.uniform(0.5, 3.0), rng.uniform(0.5, 2.0),
                               rng.uniform(-M_PI, M_PI)});
        }

        // brute force over every cell
        for (const OrientedRegion& region : regions) {
            double eta_expected = 0.0;
            for (int iy = 0; iy < grid.size(); ++iy) {
                for (int ix = 0; ix < grid.size(); ++ix) {
                    const double cx = grid.cell_center_x(ix);
                    const double cy = grid.cell_center_y(iy);
                    if (coverage(cx, cy, region) == 1) {
                        eta_expected = std::max(eta_expected, grid.at(ix, iy));
                    }
                }
            }
            REQUIRE(consistency(grid, region) == eta_expected);
        }

        const auto conflicts = conflict_map(grid, regions);
        std::size_t expected_count = 0;
        for (int iy = 0; iy < grid.size(); ++iy) {
            for (int ix = 0; ix < grid.size(); ++ix) {
                const double p = grid.at(ix, iy);
                const double cx = grid.cell_center_x(ix);
                const double cy = grid.cell_center_y(iy);
                bool covered = false;
                for (const OrientedRegion& region : regions) {
                    if (coverage(cx, cy, region) == 1) covered = true;
                }
                const double kappa = covered ? 0.0 : p;
                if (kappa > 0.0) {
                    ++expected_count;
                    bool found = false;
                    for (const ConflictCell& c : conflicts) {
                        if (c.ix == ix && c.iy == iy) {
                            found = true;
                            REQUIRE(c.kappa == kappa);
                        }
                    }
                    REQUIRE(found);
                }
            }
        }
        REQUIRE(conflicts.size() == expected_count);
    }
}

TEST_CASE("min_detectable_position_error closed form") {
    SensorCheckParams params;
    GridConfig grid;
    ObjectState o = make_object(0.0, 0.0, 1.0, 1.0);
    CHECK(min_detectable_position_error(params, grid, o) ==
          doctest::Approx(0.8485281374).epsilon(1e-9));
    o.dx = o.dy = 0.1;
    CHECK(min_detectable_position_error(params, grid, o) ==
          doctest::Approx(1.2727922061).epsilon(1e-9));
    o.dx = o.dy = 0.0;
    grid.cell_size = 0.2;
    CHECK(min_detectable_position_error(params, grid, o) ==
          doctest::Approx(0.4242640687).epsilon(1e-9));
}

namespace {

/// One object with LiDAR evidence from its true pose, reported at a shifted
/// position. Returns the check result for the (single) object.
ObjectCheckResult check_shifted_object(const ObjectState& true_obj, double shift,
                                       const Vec2& direction,
                                       const SensorCheckParams& params,
                                       double cell_size = 0.5) {
    EgoPose ego;
    LidarConfig lidar;
    lidar.range_noise_sigma = 0.0;
    const PointCloud2D cloud = simulate_lidar({true_obj}, ego, lidar, 1);
    GridConfig grid_cfg;
    grid_cfg.cell_size = cell_size;
    const OccupancyGrid grid = build_grid(cloud, ego, grid_cfg);

    ObjectState reported = true_obj;
    reported.x += shift * direction.x;
    reported.y += shift * direction.y;
    const SensorVerdict verdict = run_sensor_checks(grid, {reported}, params);
    REQUIRE(verdict.objects.size() == 1);
    return verdict.objects[0];
}

}  // namespace

TEST_CASE("position-error triggers") {
    SensorCheckParams params;
    ObjectState obj = make_object(12.0, 0.0, 1.0, 1.0);
    obj.dx = obj.dy = 0.05;

    SUBCASE("unshifted object over its evidence is not flagged") {
        const auto res = check_shifted_object(obj, 0.0, {1.0, 0.0}, params);
        CHECK(res.eta == doctest::Approx(1.0));
        CHECK_FALSE(res.position_error);
        CHECK(res.trigger == PositionErrorTrigger::None);
    }
    SUBCASE("large radial shift away from the evidence raises a false positive") {
        const auto res = check_shifted_object(obj, 3.0, {1.0, 0.0}, params);
        CHECK(res.classification == ObjectClass::FalsePositive);
        CHECK(res.position_error);
    }
    SUBCASE("conflict cluster near a consistent object's region is attributed") {
        EgoPose ego;
        LidarConfig lidar;
        lidar.range_noise_sigma = 0.0;
        ObjectState true_obj = make_object(10.0, 0.0, 1.0, 1.0);
        PointCloud2D cloud = simulate_lidar({true_obj}, ego, lidar, 1);
        // stray cluster 0.65 m beyond the region boundary
        for (int i = 0; i < 3; ++i) cloud.points.push_back({11.3 + 0.02 * i, 0.1});
        const OccupancyGrid grid = build_grid(cloud, ego, GridConfig{});
        const SensorVerdict verdict = run_sensor_checks(grid, {true_obj}, params);
        REQUIRE(verdict.objects.size() == 1);
        CHECK(verdict.objects[0].classification == ObjectClass::TruePositive);
        CHECK(verdict.objects[0].position_error);
        CHECK(verdict.objects[0].trigger == PositionErrorTrigger::FnConflict);
        CHECK(verdict.objects[0].attributed_fn_cells > 0);
        CHECK_FALSE(verdict.fn_cells.empty());
    }
}

TEST_CASE("outward shifts at the guaranteed bound are always flagged") {
    SensorCheckParams params;
    Rng rng(77);
    for (int trial = 0; trial < 20; ++trial) {
        ObjectState obj = make_object(0.0, 0.0, rng.uniform(0.5, 4.5), rng.uniform(0.5, 2.0),
                                      rng.uniform(-M_PI, M_PI));
        const double bearing = rng.uniform(-M_PI, M_PI);
        const double range = rng.uniform(8.0, 30.0);
        obj.x = range * std::cos(bearing);
        obj.y = range * std::sin(bearing);
        obj.dx = obj.dy = rng.uniform(0.0, 0.1);
        const double bound = min_detectable_position_error(params, GridConfig{}, obj);
        const Vec2 dir{std::cos(bearing), std::sin(bearing)};
        const auto res = check_shifted_object(obj, bound * 1.001, dir, params);
        REQUIRE(res.position_error);
    }
}

TEST_CASE("inward shifts below twice the bound stay silent for long objects") {
    SensorCheckParams params;
    // vehicle heading along the line of sight: the box keeps covering its
    // own evidence when it moves toward the ego
    ObjectState veh = make_object(20.0, 0.0, 4.5, 2.0, 0.0);
    veh.dx = veh.dy = 0.05;
    const double bound = min_detectable_position_error(params, GridConfig{}, veh);
    for (double m : {0.3, 0.8, 1.2, 1.6, 2.0 * bound * 0.95}) {
        const auto res = check_shifted_object(veh, m, {-1.0, 0.0}, params);
        CHECK_FALSE(res.position_error);
    }
}
