#include "legevo/voxel_grid.hpp"

#include <fstream>
#include <stdexcept>
#include <vector>

namespace legevo {

OccupancyStats occupancy_stats(const VoxelGrid& grid) {
  OccupancyStats stats;
  stats.occupied_count = grid.occupied_count();
  stats.delta = 100.0 * stats.occupied_count / VoxelGrid::kCells;
  return stats;
}

double voxel_similarity(const VoxelGrid& a, const VoxelGrid& b) {
  const int differing = static_cast<int>((a.cells ^ b.cells).count());
  return 100.0 * (VoxelGrid::kCells - differing) / VoxelGrid::kCells;
}

double jaccard_similarity(const VoxelGrid& a, const VoxelGrid& b) {
  const int inter = static_cast<int>((a.cells & b.cells).count());
  const int uni = static_cast<int>((a.cells | b.cells).count());
  if (uni == 0) return 100.0;
  return 100.0 * inter / uni;
}

std::string ascii_layers(const VoxelGrid& grid) {
  std::string out;
  out.reserve(VoxelGrid::kNy * (VoxelGrid::kNz * (VoxelGrid::kNx + 1) + 16));
  for (int iy = 0; iy < VoxelGrid::kNy; ++iy) {
    out += "layer y=" + std::to_string(iy) + '\n';
    for (int iz = 0; iz < VoxelGrid::kNz; ++iz) {
      for (int ix = 0; ix < VoxelGrid::kNx; ++ix) {
        out += grid.at(ix, iy, iz) ? '#' : '.';
      }
      out += '\n';
    }
  }
  return out;
}

void write_bitset_file(const VoxelGrid& grid, const std::filesystem::path& path) {
  std::vector<unsigned char> bytes(VoxelGrid::kCells / 8, 0);
  for (int i = 0; i < VoxelGrid::kCells; ++i) {
    if (grid.cells[i]) bytes[i / 8] |= static_cast<unsigned char>(1u << (i % 8));
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

VoxelGrid read_bitset_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for read: " + path.string());
  std::vector<unsigned char> bytes(VoxelGrid::kCells / 8, 0);
  in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (in.gcount() != static_cast<std::streamsize>(bytes.size())) {
    throw std::runtime_error("short read (expected 1024 bytes): " + path.string());
  }
  VoxelGrid grid;
  for (int i = 0; i < VoxelGrid::kCells; ++i) {
    grid.cells[i] = (bytes[i / 8] >> (i % 8)) & 1u;
  }
  return grid;
}

}  // namespace legevo
