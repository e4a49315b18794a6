#include "legevo/mesh.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <unordered_map>

#include "legevo/util.hpp"

namespace legevo {

namespace {

// Corner cycles per face direction, chosen so that triangles (0,1,2) and
// (0,2,3) wind outward. Offsets are lattice-corner offsets from the cell
// origin (ix, iy, iz).
struct FaceSpec {
  int dx, dy, dz;                        // neighbor direction
  std::array<std::array<int, 3>, 4> corners;
};

constexpr std::array<FaceSpec, 6> kFaces = {{
    {+1, 0, 0, {{{1, 0, 0}, {1, 1, 0}, {1, 1, 1}, {1, 0, 1}}}},
    {-1, 0, 0, {{{0, 0, 0}, {0, 0, 1}, {0, 1, 1}, {0, 1, 0}}}},
    {0, +1, 0, {{{0, 1, 0}, {0, 1, 1}, {1, 1, 1}, {1, 1, 0}}}},
    {0, -1, 0, {{{0, 0, 0}, {1, 0, 0}, {1, 0, 1}, {0, 0, 1}}}},
    {0, 0, +1, {{{0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1}}}},
    {0, 0, -1, {{{0, 0, 0}, {0, 1, 0}, {1, 1, 0}, {1, 0, 0}}}},
}};

bool occupied(const VoxelGrid& grid, int ix, int iy, int iz) {
  return VoxelGrid::in_bounds(ix, iy, iz) && grid.at(ix, iy, iz);
}

int corner_id(const std::array<int, 3>& c) {
  return c[0] + (VoxelGrid::kNx + 1) * (c[2] + (VoxelGrid::kNz + 1) * c[1]);
}

std::uint64_t edge_key(int corner_a, int corner_b) {
  if (corner_a > corner_b) std::swap(corner_a, corner_b);
  return (static_cast<std::uint64_t>(corner_a) << 32) | static_cast<std::uint64_t>(corner_b);
}

struct ExposedFace {
  int cell;
  std::array<std::array<int, 3>, 4> corners;  // outward cycle
};

// Two diagonally-occupied cells around a lattice edge leave four incident
// faces there, which pinches the surface. The pair of faces on the
// lower-indexed cell's side gets a midpoint inserted on that edge, so every
// output edge ends up shared by exactly two triangles.
struct PinchedEdge {
  int face_count = 0;
  int min_cell = std::numeric_limits<int>::max();
};

}  // namespace

TriangleMesh extract_surface(const VoxelGrid& grid) {
  if (grid.empty()) throw std::runtime_error("empty phenotype");

  std::vector<ExposedFace> faces;
  std::unordered_map<std::uint64_t, PinchedEdge> edges;
  for (int iy = 0; iy < VoxelGrid::kNy; ++iy) {
    for (int iz = 0; iz < VoxelGrid::kNz; ++iz) {
      for (int ix = 0; ix < VoxelGrid::kNx; ++ix) {
        if (!grid.at(ix, iy, iz)) continue;
        for (const FaceSpec& spec : kFaces) {
          if (occupied(grid, ix + spec.dx, iy + spec.dy, iz + spec.dz)) continue;
          ExposedFace face;
          face.cell = VoxelGrid::index(ix, iy, iz);
          for (int c = 0; c < 4; ++c) {
            face.corners[c] = {ix + spec.corners[c][0], iy + spec.corners[c][1],
                               iz + spec.corners[c][2]};
          }
          for (int c = 0; c < 4; ++c) {
            PinchedEdge& edge =
                edges[edge_key(corner_id(face.corners[c]), corner_id(face.corners[(c + 1) % 4]))];
            edge.face_count += 1;
            edge.min_cell = std::min(edge.min_cell, face.cell);
          }
          faces.push_back(face);
        }
      }
    }
  }

  TriangleMesh mesh;
  std::unordered_map<std::uint64_t, int> vertex_index;  // welded by position key

  auto lattice_vertex = [&](const std::array<int, 3>& c) {
    const std::uint64_t key = static_cast<std::uint64_t>(corner_id(c));
    auto [it, inserted] = vertex_index.emplace(key, static_cast<int>(mesh.vertices.size()));
    if (inserted) {
      mesh.vertices.push_back({c[0] * VoxelGrid::kVoxelEdgeMm, c[1] * VoxelGrid::kVoxelEdgeMm,
                               c[2] * VoxelGrid::kVoxelEdgeMm});
    }
    return it->second;
  };
  auto midpoint_vertex = [&](const std::array<int, 3>& a, const std::array<int, 3>& b) {
    const std::uint64_t key = (1ull << 63) | edge_key(corner_id(a), corner_id(b));
    auto [it, inserted] = vertex_index.emplace(key, static_cast<int>(mesh.vertices.size()));
    if (inserted) {
      mesh.vertices.push_back({(a[0] + b[0]) * 0.5 * VoxelGrid::kVoxelEdgeMm,
                               (a[1] + b[1]) * 0.5 * VoxelGrid::kVoxelEdgeMm,
                               (a[2] + b[2]) * 0.5 * VoxelGrid::kVoxelEdgeMm});
    }
    return it->second;
  };

  for (const ExposedFace& face : faces) {
    bool split[4] = {false, false, false, false};
    bool any_split = false;
    for (int c = 0; c < 4; ++c) {
      const PinchedEdge& edge =
          edges[edge_key(corner_id(face.corners[c]), corner_id(face.corners[(c + 1) % 4]))];
      split[c] = edge.face_count == 4 && edge.min_cell == face.cell;
      any_split = any_split || split[c];
    }

    if (!any_split) {
      const int v0 = lattice_vertex(face.corners[0]);
      const int v1 = lattice_vertex(face.corners[1]);
      const int v2 = lattice_vertex(face.corners[2]);
      const int v3 = lattice_vertex(face.corners[3]);
      mesh.triangles.push_back({v0, v1, v2});
      mesh.triangles.push_back({v0, v2, v3});
      continue;
    }

    // Boundary cycle with midpoints on the split edges; fan from a corner
    // untouched by any split, or from the (exactly representable) quad
    // center when every corner borders one.
    std::vector<int> cycle;
    for (int c = 0; c < 4; ++c) {
      cycle.push_back(lattice_vertex(face.corners[c]));
      if (split[c]) cycle.push_back(midpoint_vertex(face.corners[c], face.corners[(c + 1) % 4]));
    }

    int apex_corner = -1;
    for (int c = 0; c < 4 && apex_corner < 0; ++c) {
      if (!split[c] && !split[(c + 3) % 4]) apex_corner = c;
    }
    if (apex_corner >= 0) {
      int apex_pos = 0;
      for (int c = 0, pos = 0; c < 4; ++c) {
        if (c == apex_corner) apex_pos = pos;
        pos += split[c] ? 2 : 1;
      }
      std::rotate(cycle.begin(), cycle.begin() + apex_pos, cycle.end());
      for (size_t i = 1; i + 1 < cycle.size(); ++i) {
        mesh.triangles.push_back({cycle[0], cycle[static_cast<int>(i)], cycle[i + 1]});
      }
    } else {
      Vec3 center{};
      for (const auto& c : face.corners) {
        center += Vec3{c[0] * VoxelGrid::kVoxelEdgeMm, c[1] * VoxelGrid::kVoxelEdgeMm,
                       c[2] * VoxelGrid::kVoxelEdgeMm};
      }
      const int apex = static_cast<int>(mesh.vertices.size());
      mesh.vertices.push_back(center * 0.25);
      for (size_t i = 0; i < cycle.size(); ++i) {
        mesh.triangles.push_back(
            {apex, cycle[i], cycle[(i + 1) % cycle.size()]});
      }
    }
  }
  return mesh;
}

TriangleMesh smooth(const TriangleMesh& mesh, int iterations, double lambda) {
  if (iterations <= 0) return mesh;

  std::vector<std::vector<int>> neighbors(mesh.vertices.size());
  auto link = [&](int a, int b) {
    for (int n : neighbors[a]) {
      if (n == b) return;
    }
    neighbors[a].push_back(b);
  };
  for (const auto& tri : mesh.triangles) {
    for (int e = 0; e < 3; ++e) {
      link(tri[e], tri[(e + 1) % 3]);
      link(tri[(e + 1) % 3], tri[e]);
    }
  }

  TriangleMesh out = mesh;
  std::vector<Vec3> next(out.vertices.size());
  for (int iter = 0; iter < iterations; ++iter) {
    for (size_t v = 0; v < out.vertices.size(); ++v) {
      if (neighbors[v].empty()) {
        next[v] = out.vertices[v];
        continue;
      }
      Vec3 centroid{};
      for (int n : neighbors[v]) centroid += out.vertices[n];
      centroid = centroid * (1.0 / neighbors[v].size());
      next[v] = out.vertices[v] + (centroid - out.vertices[v]) * lambda;
    }
    out.vertices.swap(next);
  }
  return out;
}

double signed_volume(const TriangleMesh& mesh) {
  double six_volume = 0.0;
  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    six_volume += dot(a, cross(b, c));
  }
  return six_volume / 6.0;
}

void write_obj(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  for (const Vec3& v : mesh.vertices) {
    out << "v " << format_double(v.x) << ' ' << format_double(v.y) << ' ' << format_double(v.z)
        << '\n';
  }
  for (const auto& tri : mesh.triangles) {
    out << "f " << tri[0] + 1 << ' ' << tri[1] + 1 << ' ' << tri[2] + 1 << '\n';
  }
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

namespace {

void put_le32(std::string& buf, std::uint32_t v) {
  buf.push_back(static_cast<char>(v & 0xFF));
  buf.push_back(static_cast<char>((v >> 8) & 0xFF));
  buf.push_back(static_cast<char>((v >> 16) & 0xFF));
  buf.push_back(static_cast<char>((v >> 24) & 0xFF));
}

void put_f32(std::string& buf, float f) { put_le32(buf, std::bit_cast<std::uint32_t>(f)); }

}  // namespace

void write_stl(const TriangleMesh& mesh, const std::filesystem::path& path) {
  std::string buf;
  buf.reserve(84 + mesh.triangles.size() * 50);

  std::string header = "legevo voxel surface";
  header.resize(80, '\0');
  buf += header;
  put_le32(buf, static_cast<std::uint32_t>(mesh.triangles.size()));

  for (const auto& tri : mesh.triangles) {
    const Vec3& a = mesh.vertices[tri[0]];
    const Vec3& b = mesh.vertices[tri[1]];
    const Vec3& c = mesh.vertices[tri[2]];
    const Vec3 n = normalized(cross(b - a, c - a));
    for (const Vec3* v : {&n, &a, &b, &c}) {
      put_f32(buf, static_cast<float>(v->x));
      put_f32(buf, static_cast<float>(v->y));
      put_f32(buf, static_cast<float>(v->z));
    }
    buf.push_back('\0');
    buf.push_back('\0');
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace legevo
