#ifndef PERCMON_OCCUPANCY_GRID_HPP_
#define PERCMON_OCCUPANCY_GRID_HPP_

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "percmon/geometry.hpp"
#include "percmon/types.hpp"

namespace percmon {

struct GridConfig {
    double extent = 100.0;       // side length of the square region, meters
    double cell_size = 0.5;      // meters
    int saturation_count = 3;    // points per cell mapping to P = 1

    int cells_per_side() const;
    void validate() const;
};

/// Static occupancy grid of one LiDAR scan: each cell holds the spatial
/// occupancy probability of its area. Axis-aligned to the world frame;
/// the origin is the world position of the minimum corner.
class OccupancyGrid {
public:
    OccupancyGrid(GridConfig config, double origin_x, double origin_y);

    const GridConfig& config() const { return config_; }
    double origin_x() const { return origin_x_; }
    double origin_y() const { return origin_y_; }
    int size() const { return n_; }

    double at(int ix, int iy) const { return cells_[index(ix, iy)]; }
    void set(int ix, int iy, double p) { cells_[index(ix, iy)] = p; }

    bool cell_of(double x, double y, int& ix, int& iy) const;
    double cell_center_x(int ix) const { return origin_x_ + (ix + 0.5) * config_.cell_size; }
    double cell_center_y(int iy) const { return origin_y_ + (iy + 0.5) * config_.cell_size; }

    /// Indices of cells with nonzero probability, row-major (y outer).
    const std::vector<std::pair<int, int>>& occupied_cells() const { return occupied_; }
    void rebuild_occupied_index();

    std::size_t dropped_points = 0;  // points outside the extent during build

private:
    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * n_ + ix; }

    GridConfig config_;
    double origin_x_;
    double origin_y_;
    int n_;
    std::vector<double> cells_;
    std::vector<std::pair<int, int>> occupied_;
};

/// Builds the grid for one scan, centered on the ego pose (origin snapped to
/// the cell lattice so point-to-cell assignment is stable across frames).
/// A cell with n points gets probability min(1, n / saturation_count);
/// points outside the extent are dropped and counted.
OccupancyGrid build_grid(const PointCloud2D& cloud, const EgoPose& ego,
                         const GridConfig& config);

/// Probability of the cell containing (x, y); 0 outside the grid. Cells are
/// half-open: a corner belongs to the cell whose minimum corner it is.
double occupancy_at(const OccupancyGrid& grid, double x, double y);

struct CellRef {
    int ix = 0;
    int iy = 0;
    double center_x = 0.0;
    double center_y = 0.0;
    double p = 0.0;
};

/// Cells whose center lies inside the region, row-major order.
std::vector<CellRef> cells_in_region(const OccupancyGrid& grid,
                                     const OrientedRegion& region);

/// Debug dump of nonzero cells as "ix,iy,p" CSV.
void dump_grid_csv(const OccupancyGrid& grid, const std::string& path);

}  // namespace percmon

#endif  // PERCMON_OCCUPANCY_GRID_HPP_
