#pragma once

#include <string>
#include <vector>

#include "salgraph/geometry.hpp"

namespace salgraph {

// Floor occupancy grid with a region id per free cell. Cell (cx, cy) covers
// [cx*cell_size, (cx+1)*cell_size) x [cy*cell_size, (cy+1)*cell_size).
struct FloorGrid {
  int width = 0;
  int height = 0;
  double cell_size = 0.5;                      // metres per cell
  std::vector<std::vector<std::uint8_t>> occupancy;  // [y][x], true = obstructed
  std::vector<std::vector<int>> region;              // [y][x], 0 = non-floor

  bool in_bounds(int cx, int cy) const {
    return cx >= 0 && cy >= 0 && cx < width && cy < height;
  }
  bool free_cell(int cx, int cy) const {
    return in_bounds(cx, cy) && occupancy[cy][cx] == 0;
  }
  int region_at(int cx, int cy) const { return region[cy][cx]; }

  Vec2 cell_center(int cx, int cy) const {
    return {(cx + 0.5) * cell_size, (cy + 0.5) * cell_size};
  }
  int cell_x(double x) const { return static_cast<int>(std::floor(x / cell_size)); }
  int cell_y(double y) const { return static_cast<int>(std::floor(y / cell_size)); }

  bool free_at(const Vec2& p) const { return free_cell(cell_x(p.x), cell_y(p.y)); }
  int region_at(const Vec2& p) const {
    const int cx = cell_x(p.x), cy = cell_y(p.y);
    return in_bounds(cx, cy) ? region[cy][cx] : 0;
  }
};

// Checks dimension consistency and that every free cell carries a region id.
void validate_grid(const FloorGrid& grid);

// Conservative line-of-sight: true when every cell whose closed square the
// segment touches is free. Grazing a wall corner counts as obstructed.
bool segment_clear(const FloorGrid& grid, const Vec2& a, const Vec2& b);

// Halves cell_size; every cell becomes a 2x2 block with the same occupancy
// and region.
FloorGrid refine_grid(const FloorGrid& grid);

// GRID v1 file: header `GRID v1 w h cell_size`, then h rows of w characters;
// `#` is an obstructed cell, `0`-`9a-zA-Z` is the region id of a free cell
// (region ids above 61 are not representable in this format).
void write_grid_file(const std::string& path, const FloorGrid& grid);
FloorGrid read_grid_file(const std::string& path);

char region_to_char(int region);
int char_to_region(char c);

}  // namespace salgraph
