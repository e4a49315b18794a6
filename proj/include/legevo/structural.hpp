#pragma once

#include "legevo/voxel_grid.hpp"

namespace legevo {

// Conservative structural gate standing in for a full stress analysis:
// a uniform load is assumed to pass through every horizontal layer, and a
// layer whose cross-section is too small to carry it crumbles away.
struct StructuralConfig {
  double load_newtons = 60.0;  // one leg's share of a robot-class load
  double sigma_max = 2.0;      // N/mm^2
};

inline constexpr double kVoxelFaceAreaMm2 = 25.0;

// Removes every layer iy whose stress load / (occupied(iy) * 25 mm^2)
// exceeds sigma_max. Empty layers are left alone; an all-removed grid is
// legal output (the connectivity gate rejects it downstream).
VoxelGrid stress_filter(const VoxelGrid& grid, const StructuralConfig& config);

// True iff a 6-connected path of occupied voxels joins the top layer
// (iy = 31, actuator side) to the bottom layer (iy = 0, foot tip).
bool connectivity_gate(const VoxelGrid& grid);

}  // namespace legevo
