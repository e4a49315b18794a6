#pragma once

#include <array>
#include <filesystem>
#include <vector>

#include "legevo/vec3.hpp"
#include "legevo/voxel_grid.hpp"

namespace legevo {

// Watertight blocky surface in millimetres, outward winding.
struct TriangleMesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;
};

// Two triangles per exposed voxel face (6-neighborhood, grid boundary
// counts as empty), vertices welded by position. Where two diagonal voxels
// meet only along a lattice edge the surface would pinch (four triangles on
// one edge); one side of such an edge is subdivided at its midpoint so that
// every edge of the output is shared by exactly two triangles. Throws
// std::runtime_error("empty phenotype") for empty grids.
TriangleMesh extract_surface(const VoxelGrid& grid);

// Iterative Laplacian smoothing: vertices move toward the centroid of
// their edge-neighbors by factor lambda. Topology is untouched;
// iterations = 0 returns the input unchanged.
TriangleMesh smooth(const TriangleMesh& mesh, int iterations, double lambda);

// Divergence-theorem volume in mm^3; positive for outward winding.
double signed_volume(const TriangleMesh& mesh);

// ASCII OBJ: `v x y z` and 1-based `f a b c` records.
void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path);

// Binary STL: 80-byte header, little-endian uint32 triangle count, then
// 50 bytes per triangle (normal, 3 vertices, 2-byte attribute).
void write_stl(const TriangleMesh& mesh, const std::filesystem::path& path);

}  // namespace legevo
