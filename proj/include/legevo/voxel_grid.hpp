#pragma once

#include <bitset>
#include <filesystem>
#include <string>

namespace legevo {

// Fixed-resolution occupancy grid, the phenotype substrate. Linear cell
// order is ix fastest, then iz, then iy; the raw bitset dump uses the same
// order, LSB-first within each byte.
struct VoxelGrid {
  static constexpr int kNx = 16;
  static constexpr int kNy = 32;  // leg length axis
  static constexpr int kNz = 16;
  static constexpr int kCells = kNx * kNy * kNz;
  static constexpr double kVoxelEdgeMm = 5.0;

  std::bitset<kCells> cells;

  static constexpr bool in_bounds(int ix, int iy, int iz) {
    return ix >= 0 && ix < kNx && iy >= 0 && iy < kNy && iz >= 0 && iz < kNz;
  }
  static constexpr int index(int ix, int iy, int iz) { return ix + kNx * (iz + kNz * iy); }

  bool at(int ix, int iy, int iz) const { return cells[index(ix, iy, iz)]; }
  void set(int ix, int iy, int iz, bool value = true) { cells[index(ix, iy, iz)] = value; }

  int occupied_count() const { return static_cast<int>(cells.count()); }
  bool empty() const { return cells.none(); }

  bool operator==(const VoxelGrid&) const = default;
};

struct OccupancyStats {
  int occupied_count = 0;
  double delta = 0.0;  // percent of occupied cells
};

OccupancyStats occupancy_stats(const VoxelGrid& grid);

// Percentage of cells on which both grids agree (occupied or empty).
double voxel_similarity(const VoxelGrid& a, const VoxelGrid& b);

// Intersection-over-union of the occupied sets, in percent. Secondary
// analytics column; 100 for two empty grids.
double jaccard_similarity(const VoxelGrid& a, const VoxelGrid& b);

// Layered debug view, one 16x16 slab per iy layer.
std::string ascii_layers(const VoxelGrid& grid);

// 1024-byte raw dump in linear cell order.
void write_bitset_file(const VoxelGrid& grid, const std::filesystem::path& path);
VoxelGrid read_bitset_file(const std::filesystem::path& path);

}  // namespace legevo
