#include "legevo/structural.hpp"

#include <array>
#include <vector>

namespace legevo {

VoxelGrid stress_filter(const VoxelGrid& grid, const StructuralConfig& config) {
  VoxelGrid filtered = grid;
  for (int iy = 0; iy < VoxelGrid::kNy; ++iy) {
    int count = 0;
    for (int iz = 0; iz < VoxelGrid::kNz; ++iz) {
      for (int ix = 0; ix < VoxelGrid::kNx; ++ix) {
        count += grid.at(ix, iy, iz);
      }
    }
    if (count == 0) continue;
    const double sigma = config.load_newtons / (count * kVoxelFaceAreaMm2);
    if (sigma > config.sigma_max) {
      for (int iz = 0; iz < VoxelGrid::kNz; ++iz) {
        for (int ix = 0; ix < VoxelGrid::kNx; ++ix) {
          filtered.set(ix, iy, iz, false);
        }
      }
    }
  }
  return filtered;
}

bool connectivity_gate(const VoxelGrid& grid) {
  std::vector<int> stack;
  std::bitset<VoxelGrid::kCells> visited;

  for (int iz = 0; iz < VoxelGrid::kNz; ++iz) {
    for (int ix = 0; ix < VoxelGrid::kNx; ++ix) {
      if (grid.at(ix, 0, iz)) {
        const int idx = VoxelGrid::index(ix, 0, iz);
        visited[idx] = true;
        stack.push_back(idx);
      }
    }
  }

  static constexpr std::array<std::array<int, 3>, 6> kNeighbors = {
      {{1, 0, 0}, {-1, 0, 0}, {0, 1, 0}, {0, -1, 0}, {0, 0, 1}, {0, 0, -1}}};

  while (!stack.empty()) {
    const int idx = stack.back();
    stack.pop_back();
    const int ix = idx % VoxelGrid::kNx;
    const int iz = (idx / VoxelGrid::kNx) % VoxelGrid::kNz;
    const int iy = idx / (VoxelGrid::kNx * VoxelGrid::kNz);
    if (iy == VoxelGrid::kNy - 1) return true;
    for (const auto& d : kNeighbors) {
      const int nx = ix + d[0];
      const int ny = iy + d[1];
      const int nz = iz + d[2];
      if (!VoxelGrid::in_bounds(nx, ny, nz)) continue;
      const int nidx = VoxelGrid::index(nx, ny, nz);
      if (visited[nidx] || !grid.cells[nidx]) continue;
      visited[nidx] = true;
      stack.push_back(nidx);
    }
  }
  return false;
}

}  // namespace legevo
