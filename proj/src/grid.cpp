#include "salgraph/grid.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "salgraph/io_util.hpp"

namespace salgraph {

void validate_grid(const FloorGrid& grid) {
  if (grid.width <= 0 || grid.height <= 0 || grid.cell_size <= 0.0) {
    throw std::invalid_argument("grid dimensions and cell size must be positive");
  }
  if (static_cast<int>(grid.occupancy.size()) != grid.height ||
      static_cast<int>(grid.region.size()) != grid.height) {
    throw std::invalid_argument("occupancy/region row count mismatch");
  }
  for (int y = 0; y < grid.height; ++y) {
    if (static_cast<int>(grid.occupancy[y].size()) != grid.width ||
        static_cast<int>(grid.region[y].size()) != grid.width) {
      throw std::invalid_argument("occupancy/region column count mismatch");
    }
    for (int x = 0; x < grid.width; ++x) {
      if (grid.occupancy[y][x] == 0 && grid.region[y][x] <= 0) {
        throw std::invalid_argument("free cell without region id");
      }
    }
  }
}

namespace {

// Orientation sign of (b - a) x (p - a) for integer points; exact.
int orient(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by, std::int64_t px,
           std::int64_t py) {
  const std::int64_t v = (bx - ax) * (py - ay) - (by - ay) * (px - ax);
  return (v > 0) - (v < 0);
}

// Exact closed intersection test between segment (a, b) and the axis-aligned
// square [x0, x0+s] x [y0, y0+s], all in integer coordinates.
bool segment_touches_square(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by,
                            std::int64_t x0, std::int64_t y0, std::int64_t s) {
  const std::int64_t x1 = x0 + s, y1 = y0 + s;
  if (std::max(ax, bx) < x0 || std::min(ax, bx) > x1) return false;
  if (std::max(ay, by) < y0 || std::min(ay, by) > y1) return false;
  const int o1 = orient(ax, ay, bx, by, x0, y0);
  const int o2 = orient(ax, ay, bx, by, x1, y0);
  const int o3 = orient(ax, ay, bx, by, x1, y1);
  const int o4 = orient(ax, ay, bx, by, x0, y1);
  // All four corners strictly on one side means no contact; anything else
  // (given the bounding boxes overlap) is a touch.
  if (o1 > 0 && o2 > 0 && o3 > 0 && o4 > 0) return false;
  if (o1 < 0 && o2 < 0 && o3 < 0 && o4 < 0) return false;
  return true;
}

// Doubled-and-rounded integer coordinate of a position expressed in cells.
// Node positions sit on cell centers or cell edges, so 2*x/cell_size is an
// integer up to floating-point dust.
std::int64_t doubled_cell_coord(double v, double cell_size) {
  return std::llround(2.0 * v / cell_size);
}

}  // namespace

bool segment_clear(const FloorGrid& grid, const Vec2& a, const Vec2& b) {
  const std::int64_t ax = doubled_cell_coord(a.x, grid.cell_size);
  const std::int64_t ay = doubled_cell_coord(a.y, grid.cell_size);
  const std::int64_t bx = doubled_cell_coord(b.x, grid.cell_size);
  const std::int64_t by = doubled_cell_coord(b.y, grid.cell_size);

  const std::int64_t cx_min = std::min(ax, bx) / 2 - 1;
  const std::int64_t cx_max = std::max(ax, bx) / 2 + 1;
  const std::int64_t cy_lo = std::min(ay, by) / 2 - 1;
  const std::int64_t cy_hi = std::max(ay, by) / 2 + 1;
  for (std::int64_t cy = cy_lo; cy <= cy_hi; ++cy) {
    // Approximate x-span of the segment within this row, padded by a cell on
    // each side; the per-cell test below is exact, the span just trims work.
    std::int64_t cx_lo = cx_min, cx_hi = cx_max;
    if (ay != by) {
      const double inv_dy = 1.0 / static_cast<double>(by - ay);
      double t0 = (2.0 * cy - ay) * inv_dy;
      double t1 = (2.0 * (cy + 1) - ay) * inv_dy;
      if (t0 > t1) std::swap(t0, t1);
      t0 = std::max(0.0, t0);
      t1 = std::min(1.0, t1);
      if (t0 <= t1) {
        const double xa = ax + t0 * (bx - ax);
        const double xb = ax + t1 * (bx - ax);
        cx_lo = std::max(cx_min, static_cast<std::int64_t>(std::floor(std::min(xa, xb) / 2.0)) - 1);
        cx_hi = std::min(cx_max, static_cast<std::int64_t>(std::ceil(std::max(xa, xb) / 2.0)) + 1);
      }
    }
    for (std::int64_t cx = cx_lo; cx <= cx_hi; ++cx) {
      // Cell (cx, cy) is the square [2cx, 2cx+2] x [2cy, 2cy+2] in doubled
      // coordinates; closed squares make the traversal a supercover.
      if (!segment_touches_square(ax, ay, bx, by, 2 * cx, 2 * cy, 2)) continue;
      if (!grid.free_cell(static_cast<int>(cx), static_cast<int>(cy))) return false;
    }
  }
  return true;
}

FloorGrid refine_grid(const FloorGrid& grid) {
  FloorGrid fine;
  fine.width = grid.width * 2;
  fine.height = grid.height * 2;
  fine.cell_size = grid.cell_size / 2.0;
  fine.occupancy.assign(fine.height, std::vector<std::uint8_t>(fine.width, 1));
  fine.region.assign(fine.height, std::vector<int>(fine.width, 0));
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      for (int dy = 0; dy < 2; ++dy) {
        for (int dx = 0; dx < 2; ++dx) {
          fine.occupancy[2 * y + dy][2 * x + dx] = grid.occupancy[y][x];
          fine.region[2 * y + dy][2 * x + dx] = grid.region[y][x];
        }
      }
    }
  }
  return fine;
}

char region_to_char(int region) {
  if (region >= 1 && region <= 9) return static_cast<char>('0' + region);
  if (region >= 10 && region <= 35) return static_cast<char>('a' + region - 10);
  if (region >= 36 && region <= 61) return static_cast<char>('A' + region - 36);
  throw std::runtime_error("GRID v1 encodes at most 61 region ids");
}

int char_to_region(char c) {
  if (c >= '1' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'z') return c - 'a' + 10;
  if (c >= 'A' && c <= 'Z') return c - 'A' + 36;
  throw std::runtime_error(std::string("bad region character: ") + c);
}

void write_grid_file(const std::string& path, const FloorGrid& grid) {
  validate_grid(grid);
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write grid file: " + path);
  }
  out << "GRID v1 " << grid.width << ' ' << grid.height << ' ' << full17(grid.cell_size) << "\n";
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      out << (grid.occupancy[y][x] ? '#' : region_to_char(grid.region[y][x]));
    }
    out << "\n";
  }
}

FloorGrid read_grid_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open grid file: " + path);
  }
  std::string magic, version;
  FloorGrid grid;
  if (!(in >> magic >> version >> grid.width >> grid.height >> grid.cell_size) ||
      magic != "GRID") {
    throw std::runtime_error("not a GRID file: " + path);
  }
  if (version != "v1") {
    throw DomainError(Errc::unsupported_version, "grid file version " + version);
  }
  std::string line;
  std::getline(in, line);
  grid.occupancy.assign(grid.height, std::vector<std::uint8_t>(grid.width, 1));
  grid.region.assign(grid.height, std::vector<int>(grid.width, 0));
  for (int y = 0; y < grid.height; ++y) {
    if (!std::getline(in, line) || static_cast<int>(line.size()) < grid.width) {
      throw std::runtime_error("truncated grid row");
    }
    for (int x = 0; x < grid.width; ++x) {
      if (line[x] == '#') continue;
      grid.occupancy[y][x] = 0;
      grid.region[y][x] = char_to_region(line[x]);
    }
  }
  validate_grid(grid);
  return grid;
}

}  // namespace salgraph
