#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace firesl {

// Axis-aligned raster with origin at the lower-left corner of cell (0,0).
// Cell (ix, iy) spans [x0 + ix*dx, x0 + (ix+1)*dx) x [y0 + iy*dy, ...);
// values are stored row-major, index = iy*nx + ix.
struct Grid {
  double x0 = 0.0, y0 = 0.0;
  double dx = 1.0, dy = 1.0;
  std::size_t nx = 0, ny = 0;
  std::vector<double> values;
  std::vector<bool> present;

  Grid() = default;
  Grid(double x0_, double y0_, double dx_, double dy_, std::size_t nx_,
       std::size_t ny_);

  std::size_t index(std::size_t ix, std::size_t iy) const { return iy * nx + ix; }
  double center_x(std::size_t ix) const { return x0 + (static_cast<double>(ix) + 0.5) * dx; }
  double center_y(std::size_t iy) const { return y0 + (static_cast<double>(iy) + 0.5) * dy; }
  double xmax() const { return x0 + static_cast<double>(nx) * dx; }
  double ymax() const { return y0 + static_cast<double>(ny) * dy; }

  void set(std::size_t ix, std::size_t iy, double v) {
    values[index(ix, iy)] = v;
    present[index(ix, iy)] = true;
  }
  void set_missing(std::size_t ix, std::size_t iy) {
    present[index(ix, iy)] = false;
  }
};

// dst supplies the target geometry; returned grid has dst's geometry with
// resampled values. Cells not covered by the src extent come back missing.
Grid resample_bilinear(const Grid& src, const Grid& dst);
Grid resample_area_weighted(const Grid& src, const Grid& dst);
Grid resample_nearest(const Grid& src, const Grid& dst);

// Text I/O: header line `x0 y0 dx dy nx ny`, then ny rows of nx
// comma-separated values (row iy=0 first), empty field = missing.
Grid load_grid(const std::string& path);
void save_grid(const Grid& grid, const std::string& path);

}  // namespace firesl
