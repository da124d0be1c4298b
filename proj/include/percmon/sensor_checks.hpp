#ifndef PERCMON_SENSOR_CHECKS_HPP_
#define PERCMON_SENSOR_CHECKS_HPP_

#include <cstdint>
#include <vector>

#include "percmon/geometry.hpp"
#include "percmon/occupancy_grid.hpp"
#include "percmon/types.hpp"

namespace percmon {

struct SensorCheckParams {
    double tau_tp = 0.8;      // consistency threshold: FP iff eta < tau_tp
    double tau_fn = 0.8;      // conflict threshold: FN cell iff kappa > tau_fn
    double delta_safe = 0.1;  // safety margin, meters
    double gamma_sens = 3.0;  // margin sensitivity factor
    double attr_radius = 2.0; // FN-cell to object attribution radius, meters

    void validate() const;
};

enum class ObjectClass { TruePositive, FalsePositive };

/// Why a position error was raised for an object.
enum class PositionErrorTrigger { None, FalsePositive, FnConflict, Both };

struct ObjectCheckResult {
    std::int64_t object_id = 0;
    double eta = 0.0;
    ObjectClass classification = ObjectClass::TruePositive;
    bool position_error = false;
    PositionErrorTrigger trigger = PositionErrorTrigger::None;
    int attributed_fn_cells = 0;
};

struct ConflictCell {
    int ix = 0;
    int iy = 0;
    double center_x = 0.0;
    double center_y = 0.0;
    double kappa = 0.0;
};

struct SensorVerdict {
    std::vector<ObjectCheckResult> objects;
    std::vector<ConflictCell> fn_cells;  // cells with kappa > tau_fn
};

/// Region covered by an object, enlarged by the safety margin and the scaled
/// uncertainty margins (per axis, in the object frame).
OrientedRegion object_region(const ObjectState& o, const SensorCheckParams& params);

/// 1 iff the position lies inside or on the boundary of the region.
int coverage(double x, double y, const OrientedRegion& region);

/// Maximum occupancy probability over cells whose center the region covers;
/// 0 when no cell is covered.
double consistency(const OccupancyGrid& grid, const OrientedRegion& region);

/// Conflict of each occupied cell: kappa = P for cell centers covered by no
/// region, 0 otherwise. Only cells with kappa > 0 are returned, row-major.
std::vector<ConflictCell> conflict_map(const OccupancyGrid& grid,
                                       const std::vector<OrientedRegion>& regions);

std::vector<ObjectClass> classify_objects(const std::vector<double>& etas,
                                          const SensorCheckParams& params);

std::vector<ConflictCell> classify_cells(const std::vector<ConflictCell>& conflicts,
                                         const SensorCheckParams& params);

/// Position-error flags from the already-computed classifications and FN
/// cells: an object is flagged when it is a FalsePositive, or when an FN cell
/// lies within attr_radius of its region boundary and no other region is
/// nearer (ties flag all tied objects). objects[i] pairs with regions[i].
void detect_position_errors(std::vector<ObjectCheckResult>& objects,
                            const std::vector<ConflictCell>& fn_cells,
                            const std::vector<OrientedRegion>& regions,
                            const SensorCheckParams& params);

/// Full per-frame sensor check: consistency classification per object,
/// scene-level FN-conflict cells, and per-object position-error flags
/// (FalsePositive trigger, or an FN cell within attr_radius of the region
/// boundary, attributed to the nearest region; ties flag all tied objects).
///
/// Conflicts are evaluated against regions grown by half a cell so that
/// boundary evidence whose cell center quantizes outside the object box does
/// not raise conflicts on clean scenes.
SensorVerdict run_sensor_checks(const OccupancyGrid& grid,
                                const std::vector<ObjectState>& objects,
                                const SensorCheckParams& params);

/// Closed-form guaranteed-detectable radial position error: the largest
/// intra-cell shift diagonal to the grid plus the scaled border uncertainty.
double min_detectable_position_error(const SensorCheckParams& params,
                                     const GridConfig& grid_config,
                                     const ObjectState& o);

}  // namespace percmon

#endif  // PERCMON_SENSOR_CHECKS_HPP_
