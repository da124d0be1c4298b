#include "percmon/sensor_checks.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace percmon {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kTieTolerance = 1e-9;
}

void SensorCheckParams::validate() const {
    if (tau_tp <= 0.0 || tau_tp > 1.0) throw ConfigError("tau_tp must be in (0, 1]");
    if (tau_fn <= 0.0 || tau_fn > 1.0) throw ConfigError("tau_fn must be in (0, 1]");
    if (delta_safe < 0.0) throw ConfigError("delta_safe must be >= 0");
    if (gamma_sens < 0.0) throw ConfigError("gamma_sens must be >= 0");
    if (attr_radius < 0.0) throw ConfigError("attr_radius must be >= 0");
}

OrientedRegion object_region(const ObjectState& o, const SensorCheckParams& params) {
    OrientedRegion r;
    r.cx = o.x;
    r.cy = o.y;
    r.theta = o.theta;
    r.half_length = o.l / 2.0 + params.delta_safe + params.gamma_sens * (o.dx + o.dl);
    r.half_width = o.w / 2.0 + params.delta_safe + params.gamma_sens * (o.dy + o.dw);
    return r;
}

int coverage(double x, double y, const OrientedRegion& region) {
    return region.contains(x, y) ? 1 : 0;
}

double consistency(const OccupancyGrid& grid, const OrientedRegion& region) {
    double eta = 0.0;
    for (const CellRef& cell : cells_in_region(grid, region)) {
        eta = std::max(eta, cell.p);
    }
    return eta;
}

std::vector<ConflictCell> conflict_map(const OccupancyGrid& grid,
                                       const std::vector<OrientedRegion>& regions) {
    std::vector<ConflictCell> out;
    for (const auto& [ix, iy] : grid.occupied_cells()) {
        const double cx = grid.cell_center_x(ix);
        const double cy = grid.cell_center_y(iy);
        bool covered = false;
        for (const OrientedRegion& r : regions) {
            if (r.contains(cx, cy)) {
                covered = true;
                break;
            }
        }
        if (!covered) {
            out.push_back({ix, iy, cx, cy, grid.at(ix, iy)});
        }
    }
    return out;
}

std::vector<ObjectClass> classify_objects(const std::vector<double>& etas,
                                          const SensorCheckParams& params) {
    std::vector<ObjectClass> out;
    out.reserve(etas.size());
    for (double eta : etas) {
        out.push_back(eta < params.tau_tp ? ObjectClass::FalsePositive
                                          : ObjectClass::TruePositive);
    }
    return out;
}

std::vector<ConflictCell> classify_cells(const std::vector<ConflictCell>& conflicts,
                                         const SensorCheckParams& params) {
    std::vector<ConflictCell> out;
    for (const ConflictCell& c : conflicts) {
        if (c.kappa > params.tau_fn) out.push_back(c);
    }
    return out;
}

void detect_position_errors(std::vector<ObjectCheckResult>& objects,
                            const std::vector<ConflictCell>& fn_cells,
                            const std::vector<OrientedRegion>& regions,
                            const SensorCheckParams& params) {
    for (const ConflictCell& cell : fn_cells) {
        double best = std::numeric_limits<double>::infinity();
        for (const OrientedRegion& r : regions) {
            best = std::min(best, r.boundary_distance(cell.center_x, cell.center_y));
        }
        if (best > params.attr_radius) continue;
        for (std::size_t i = 0; i < regions.size(); ++i) {
            const double d = regions[i].boundary_distance(cell.center_x, cell.center_y);
            if (d <= best + kTieTolerance) {
                ++objects[i].attributed_fn_cells;
            }
        }
    }

    for (ObjectCheckResult& res : objects) {
        const bool via_fp = res.classification == ObjectClass::FalsePositive;
        const bool via_fn = res.attributed_fn_cells > 0;
        res.position_error = via_fp || via_fn;
        if (via_fp && via_fn) {
            res.trigger = PositionErrorTrigger::Both;
        } else if (via_fp) {
            res.trigger = PositionErrorTrigger::FalsePositive;
        } else if (via_fn) {
            res.trigger = PositionErrorTrigger::FnConflict;
        }
    }
}

SensorVerdict run_sensor_checks(const OccupancyGrid& grid,
                                const std::vector<ObjectState>& objects,
                                const SensorCheckParams& params) {
    SensorVerdict verdict;
    verdict.objects.reserve(objects.size());

    std::vector<OrientedRegion> regions;
    std::vector<OrientedRegion> conflict_regions;
    regions.reserve(objects.size());
    conflict_regions.reserve(objects.size());
    // conflict coverage uses the region grown by half a cell: a cell whose
    // area overlaps the region may hold that object's own boundary evidence
    // even when its center falls just outside
    const double quantization_guard = grid.config().cell_size / 2.0;
    for (const ObjectState& o : objects) {
        regions.push_back(object_region(o, params));
        conflict_regions.push_back(regions.back().expanded(quantization_guard));
    }

    for (std::size_t i = 0; i < objects.size(); ++i) {
        ObjectCheckResult res;
        res.object_id = objects[i].id;
        res.eta = consistency(grid, regions[i]);
        res.classification = res.eta < params.tau_tp ? ObjectClass::FalsePositive
                                                     : ObjectClass::TruePositive;
        verdict.objects.push_back(res);
    }

    verdict.fn_cells = classify_cells(conflict_map(grid, conflict_regions), params);
    detect_position_errors(verdict.objects, verdict.fn_cells, regions, params);
    return verdict;
}

double min_detectable_position_error(const SensorCheckParams& params,
                                     const GridConfig& grid_config,
                                     const ObjectState& o) {
    const double border_uncertainty = std::hypot(o.dx + o.dl, o.dy + o.dw);
    return kSqrt2 * (grid_config.cell_size + params.delta_safe) +
           params.gamma_sens * border_uncertainty;
}

}  // namespace percmon
