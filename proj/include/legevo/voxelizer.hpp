#pragma once

#include <stdexcept>

#include "legevo/genome.hpp"
#include "legevo/voxel_grid.hpp"

namespace legevo {

struct RasterConfig {
  // Uniform samples per spline; at 256 the step along any curve inside the
  // grid is well below one voxel edge.
  int samples_per_spline = 256;
};

// Raised for genomes whose material cannot span the length axis.
struct DegenerateGenome : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Affinely stretches the genome along y so that the sampled curve bundle
// spans exactly [0, 32]: every leg occupies the full grid length. x and z
// are untouched. Control points that the stretch pushes out of range are
// clamped; if clamping shortens the achieved span the map is re-applied
// until the span converges. Throws DegenerateGenome when the sampled
// y-extent is (numerically) zero.
LegGenome rescale_to_full_length(const LegGenome& genome, const RasterConfig& config = {});

// Marks, for every curve sample, the containing voxel plus every voxel
// whose center lies within thickness/2 (in voxel units) of the sample;
// thickness 1 therefore marks exactly the containing voxel. Samples on the
// upper grid boundary clamp into the last index. Pure and deterministic.
VoxelGrid rasterize(const LegGenome& genome, const RasterConfig& config = {});

}  // namespace legevo
