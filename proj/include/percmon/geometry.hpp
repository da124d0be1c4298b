#ifndef PERCMON_GEOMETRY_HPP_
#define PERCMON_GEOMETRY_HPP_

#include <algorithm>
#include <cmath>

#include "percmon/types.hpp"

namespace percmon {

/// Oriented rectangle in the world frame. Houses the covered region of an
/// object, possibly enlarged by safety and uncertainty margins.
struct OrientedRegion {
    double cx = 0.0;
    double cy = 0.0;
    double half_length = 0.5;  // along heading
    double half_width = 0.5;   // across heading
    double theta = 0.0;

    /// Closed-region membership (boundary included).
    bool contains(double px, double py) const {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const double rx = px - cx;
        const double ry = py - cy;
        const double u = c * rx + s * ry;
        const double v = -s * rx + c * ry;
        return std::abs(u) <= half_length && std::abs(v) <= half_width;
    }

    /// Distance from a point to the region boundary; 0 for interior points.
    double boundary_distance(double px, double py) const {
        const double c = std::cos(theta);
        const double s = std::sin(theta);
        const double rx = px - cx;
        const double ry = py - cy;
        const double u = std::abs(c * rx + s * ry) - half_length;
        const double v = std::abs(-s * rx + c * ry) - half_width;
        const double du = std::max(u, 0.0);
        const double dv = std::max(v, 0.0);
        return std::hypot(du, dv);
    }

    OrientedRegion expanded(double amount) const {
        OrientedRegion r = *this;
        r.half_length += amount;
        r.half_width += amount;
        return r;
    }

    /// Axis-aligned bounding box, for grid iteration.
    void aabb(double& min_x, double& min_y, double& max_x, double& max_y) const {
        const double c = std::abs(std::cos(theta));
        const double s = std::abs(std::sin(theta));
        const double ex = c * half_length + s * half_width;
        const double ey = s * half_length + c * half_width;
        min_x = cx - ex;
        max_x = cx + ex;
        min_y = cy - ey;
        max_y = cy + ey;
    }
};

/// Nearest ray/region intersection parameter (slab test in the box frame).
/// Returns true and the entry distance along the unit direction `dir` when
/// the ray starting at `origin` hits the region within [0, max_t].
inline bool ray_region_intersection(const Vec2& origin, const Vec2& dir,
                                    const OrientedRegion& region, double max_t,
                                    double& t_hit) {
    const double c = std::cos(region.theta);
    const double s = std::sin(region.theta);
    // ray in box coordinates
    const double ox = c * (origin.x - region.cx) + s * (origin.y - region.cy);
    const double oy = -s * (origin.x - region.cx) + c * (origin.y - region.cy);
    const double dx = c * dir.x + s * dir.y;
    const double dy = -s * dir.x + c * dir.y;

    double t0 = 0.0;
    double t1 = max_t;
    const double half[2] = {region.half_length, region.half_width};
    const double o[2] = {ox, oy};
    const double d[2] = {dx, dy};
    for (int axis = 0; axis < 2; ++axis) {
        if (std::abs(d[axis]) < 1e-15) {
            if (std::abs(o[axis]) > half[axis]) return false;
            continue;
        }
        double ta = (-half[axis] - o[axis]) / d[axis];
        double tb = (half[axis] - o[axis]) / d[axis];
        if (ta > tb) std::swap(ta, tb);
        t0 = std::max(t0, ta);
        t1 = std::min(t1, tb);
        if (t0 > t1) return false;
    }
    t_hit = t0;
    return true;
}

}  // namespace percmon

#endif  // PERCMON_GEOMETRY_HPP_
