#include "firesl/grid.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "firesl/errors.hpp"
#include "firesl/text.hpp"

namespace firesl {

Grid::Grid(double x0_, double y0_, double dx_, double dy_, std::size_t nx_,
           std::size_t ny_)
    : x0(x0_), y0(y0_), dx(dx_), dy(dy_), nx(nx_), ny(ny_),
      values(nx_ * ny_, std::numeric_limits<double>::quiet_NaN()),
      present(nx_ * ny_, false) {
  if (dx <= 0.0 || dy <= 0.0) throw DegenerateInput("grid cell sizes must be positive");
  if (nx == 0 || ny == 0) throw DegenerateInput("grid dimensions must be positive");
}

namespace {

void require_overlap(const Grid& src, const Grid& dst) {
  const bool overlap = src.x0 < dst.xmax() && dst.x0 < src.xmax() &&
                       src.y0 < dst.ymax() && dst.y0 < src.ymax();
  if (!overlap) throw NoOverlap("source and destination grids do not overlap");
}

}  // namespace

Grid resample_bilinear(const Grid& src, const Grid& dst) {
  require_overlap(src, dst);
  Grid out(dst.x0, dst.y0, dst.dx, dst.dy, dst.nx, dst.ny);
  for (std::size_t iy = 0; iy < dst.ny; ++iy) {
    for (std::size_t ix = 0; ix < dst.nx; ++ix) {
      const double cx = dst.center_x(ix), cy = dst.center_y(iy);
      // Position in src cell-center coordinates.
      const double u = (cx - src.center_x(0)) / src.dx;
      const double v = (cy - src.center_y(0)) / src.dy;
      const double fu = std::floor(u), fv = std::floor(v);
      const long i0 = static_cast<long>(fu), j0 = static_cast<long>(fv);
      const double wu = u - fu, wv = v - fv;
      const double w[4] = {(1 - wu) * (1 - wv), wu * (1 - wv),
                           (1 - wu) * wv, wu * wv};
      const long ii[4] = {i0, i0 + 1, i0, i0 + 1};
      const long jj[4] = {j0, j0, j0 + 1, j0 + 1};
      double acc = 0.0;
      bool ok = true;
      for (int c = 0; c < 4 && ok; ++c) {
        if (w[c] == 0.0) continue;  // zero-weight corners may fall off-grid
        if (ii[c] < 0 || jj[c] < 0 ||
            ii[c] >= static_cast<long>(src.nx) ||
            jj[c] >= static_cast<long>(src.ny)) {
          ok = false;
        } else if (!src.present[src.index(static_cast<std::size_t>(ii[c]),
                                          static_cast<std::size_t>(jj[c]))]) {
          ok = false;
        } else {
          acc += w[c] * src.values[src.index(static_cast<std::size_t>(ii[c]),
                                             static_cast<std::size_t>(jj[c]))];
        }
      }
      if (ok) out.set(ix, iy, acc);
    }
  }
  return out;
}

Grid resample_area_weighted(const Grid& src, const Grid& dst) {
  require_overlap(src, dst);
  Grid out(dst.x0, dst.y0, dst.dx, dst.dy, dst.nx, dst.ny);
  const double cell_area = dst.dx * dst.dy;
  for (std::size_t iy = 0; iy < dst.ny; ++iy) {
    for (std::size_t ix = 0; ix < dst.nx; ++ix) {
      const double xl = dst.x0 + static_cast<double>(ix) * dst.dx;
      const double xr = xl + dst.dx;
      const double yl = dst.y0 + static_cast<double>(iy) * dst.dy;
      const double yr = yl + dst.dy;
      // Range of src cells intersecting the dst cell.
      const long i_lo = static_cast<long>(std::floor((xl - src.x0) / src.dx));
      const long i_hi = static_cast<long>(std::ceil((xr - src.x0) / src.dx));
      const long j_lo = static_cast<long>(std::floor((yl - src.y0) / src.dy));
      const long j_hi = static_cast<long>(std::ceil((yr - src.y0) / src.dy));
      double covered = 0.0, weight = 0.0, acc = 0.0;
      for (long j = std::max(0L, j_lo);
           j < std::min(static_cast<long>(src.ny), j_hi); ++j) {
        for (long i = std::max(0L, i_lo);
             i < std::min(static_cast<long>(src.nx), i_hi); ++i) {
          const double sxl = src.x0 + static_cast<double>(i) * src.dx;
          const double syl = src.y0 + static_cast<double>(j) * src.dy;
          const double ox = std::min(xr, sxl + src.dx) - std::max(xl, sxl);
          const double oy = std::min(yr, syl + src.dy) - std::max(yl, syl);
          if (ox <= 0.0 || oy <= 0.0) continue;
          const double a = ox * oy;
          covered += a;
          const std::size_t idx = src.index(static_cast<std::size_t>(i),
                                            static_cast<std::size_t>(j));
          if (src.present[idx]) {
            weight += a;
            acc += a * src.values[idx];
          }
        }
      }
      // Missing unless the dst cell lies inside the src extent and at least
      // one observed src cell contributes.
      if (covered >= cell_area * (1.0 - 1e-9) && weight > 0.0)
        out.set(ix, iy, acc / weight);
    }
  }
  return out;
}

Grid resample_nearest(const Grid& src, const Grid& dst) {
  require_overlap(src, dst);
  Grid out(dst.x0, dst.y0, dst.dx, dst.dy, dst.nx, dst.ny);
  for (std::size_t iy = 0; iy < dst.ny; ++iy) {
    for (std::size_t ix = 0; ix < dst.nx; ++ix) {
      const double cx = dst.center_x(ix), cy = dst.center_y(iy);
      if (cx < src.x0 || cx > src.xmax() || cy < src.y0 || cy > src.ymax())
        continue;
      // Containing cell; centers on the top/right edge clamp inward.
      long i = static_cast<long>(std::floor((cx - src.x0) / src.dx));
      long j = static_cast<long>(std::floor((cy - src.y0) / src.dy));
      i = std::clamp(i, 0L, static_cast<long>(src.nx) - 1);
      j = std::clamp(j, 0L, static_cast<long>(src.ny) - 1);
      const std::size_t idx = src.index(static_cast<std::size_t>(i),
                                        static_cast<std::size_t>(j));
      if (src.present[idx]) out.set(ix, iy, src.values[idx]);
    }
  }
  return out;
}

Grid load_grid(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw SchemaMismatch("'" + path + "' is empty");
  auto head = split(trim(line), ' ');
  std::vector<std::string_view> fields;
  for (auto f : head)
    if (!trim(f).empty()) fields.push_back(trim(f));
  if (fields.size() != 6)
    throw SchemaMismatch("'" + path + "': header must be 'x0 y0 dx dy nx ny'");
  Grid g(parse_double(fields[0], path), parse_double(fields[1], path),
         parse_double(fields[2], path), parse_double(fields[3], path),
         static_cast<std::size_t>(parse_int(fields[4], path)),
         static_cast<std::size_t>(parse_int(fields[5], path)));
  for (std::size_t iy = 0; iy < g.ny; ++iy) {
    if (!std::getline(in, line))
      throw ParseError("'" + path + "': expected " + std::to_string(g.ny) + " rows");
    auto cells = split(trim(line), ',');
    if (cells.size() != g.nx)
      throw ParseError("'" + path + "' row " + std::to_string(iy + 2) +
                       ": expected " + std::to_string(g.nx) + " cells");
    for (std::size_t ix = 0; ix < g.nx; ++ix) {
      auto f = trim(cells[ix]);
      if (!f.empty()) g.set(ix, iy, parse_double(f, path));
    }
  }
  return g;
}

void save_grid(const Grid& grid, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write '" + path + "'");
  out << format_double(grid.x0) << ' ' << format_double(grid.y0) << ' '
      << format_double(grid.dx) << ' ' << format_double(grid.dy) << ' '
      << grid.nx << ' ' << grid.ny << '\n';
  for (std::size_t iy = 0; iy < grid.ny; ++iy) {
    for (std::size_t ix = 0; ix < grid.nx; ++ix) {
      if (ix) out << ',';
      if (grid.present[grid.index(ix, iy)])
        out << format_double(grid.values[grid.index(ix, iy)]);
    }
    out << '\n';
  }
}

}  // namespace firesl
