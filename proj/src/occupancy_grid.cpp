#include "percmon/occupancy_grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "percmon/io.hpp"

namespace percmon {

int GridConfig::cells_per_side() const {
    return static_cast<int>(std::llround(extent / cell_size));
}

void GridConfig::validate() const {
    if (extent <= 0.0) throw ConfigError("grid extent must be positive");
    if (cell_size <= 0.0) throw ConfigError("grid cell_size must be positive");
    const double ratio = extent / cell_size;
    if (std::abs(ratio - std::llround(ratio)) > 1e-9) {
        throw ConfigError("grid extent must be an integer multiple of cell_size");
    }
    if (saturation_count < 1) throw ConfigError("saturation_count must be >= 1");
}

OccupancyGrid::OccupancyGrid(GridConfig config, double origin_x, double origin_y)
    : config_(config),
      origin_x_(origin_x),
      origin_y_(origin_y),
      n_(config.cells_per_side()),
      cells_(static_cast<std::size_t>(n_) * n_, 0.0) {}

bool OccupancyGrid::cell_of(double x, double y, int& ix, int& iy) const {
    const double fx = (x - origin_x_) / config_.cell_size;
    const double fy = (y - origin_y_) / config_.cell_size;
    ix = static_cast<int>(std::floor(fx));
    iy = static_cast<int>(std::floor(fy));
    return ix >= 0 && iy >= 0 && ix < n_ && iy < n_;
}

void OccupancyGrid::rebuild_occupied_index() {
    occupied_.clear();
    for (int iy = 0; iy < n_; ++iy) {
        for (int ix = 0; ix < n_; ++ix) {
            if (cells_[index(ix, iy)] > 0.0) occupied_.emplace_back(ix, iy);
        }
    }
}

OccupancyGrid build_grid(const PointCloud2D& cloud, const EgoPose& ego,
                         const GridConfig& config) {
    config.validate();
    const double half = config.extent / 2.0;
    // snap the minimum corner to the cell lattice
    const double ox = std::floor((ego.x - half) / config.cell_size) * config.cell_size;
    const double oy = std::floor((ego.y - half) / config.cell_size) * config.cell_size;
    OccupancyGrid grid(config, ox, oy);

    const int n = grid.size();
    std::vector<int> counts(static_cast<std::size_t>(n) * n, 0);
    std::size_t dropped = 0;
    for (const Vec2& p : cloud.points) {
        int ix, iy;
        if (!grid.cell_of(p.x, p.y, ix, iy)) {
            ++dropped;
            continue;
        }
        ++counts[static_cast<std::size_t>(iy) * n + ix];
    }
    for (int iy = 0; iy < n; ++iy) {
        for (int ix = 0; ix < n; ++ix) {
            const int c = counts[static_cast<std::size_t>(iy) * n + ix];
            if (c > 0) {
                grid.set(ix, iy, std::min(1.0, static_cast<double>(c) / config.saturation_count));
            }
        }
    }
    grid.dropped_points = dropped;
    grid.rebuild_occupied_index();
    return grid;
}

double occupancy_at(const OccupancyGrid& grid, double x, double y) {
    int ix, iy;
    if (!grid.cell_of(x, y, ix, iy)) return 0.0;
    return grid.at(ix, iy);
}

std::vector<CellRef> cells_in_region(const OccupancyGrid& grid,
                                     const OrientedRegion& region) {
    std::vector<CellRef> out;
    double min_x, min_y, max_x, max_y;
    region.aabb(min_x, min_y, max_x, max_y);
    const double cs = grid.config().cell_size;
    const int n = grid.size();
    int ix0 = static_cast<int>(std::floor((min_x - grid.origin_x()) / cs));
    int iy0 = static_cast<int>(std::floor((min_y - grid.origin_y()) / cs));
    int ix1 = static_cast<int>(std::floor((max_x - grid.origin_x()) / cs));
    int iy1 = static_cast<int>(std::floor((max_y - grid.origin_y()) / cs));
    ix0 = std::max(ix0, 0);
    iy0 = std::max(iy0, 0);
    ix1 = std::min(ix1, n - 1);
    iy1 = std::min(iy1, n - 1);
    for (int iy = iy0; iy <= iy1; ++iy) {
        for (int ix = ix0; ix <= ix1; ++ix) {
            const double cx = grid.cell_center_x(ix);
            const double cy = grid.cell_center_y(iy);
            if (region.contains(cx, cy)) {
                out.push_back({ix, iy, cx, cy, grid.at(ix, iy)});
            }
        }
    }
    return out;
}

void dump_grid_csv(const OccupancyGrid& grid, const std::string& path) {
    std::ostringstream out;
    out << "ix,iy,p\n";
    char buf[64];
    for (const auto& [ix, iy] : grid.occupied_cells()) {
        std::snprintf(buf, sizeof(buf), "%d,%d,%.10g\n", ix, iy, grid.at(ix, iy));
        out << buf;
    }
    atomic_write_text(path, out.str());
}

}  // namespace percmon
