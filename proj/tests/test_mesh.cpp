#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "legevo/mesh.hpp"
#include "legevo/structural.hpp"
#include "legevo/voxelizer.hpp"
#include "test_oracles.hpp"

using namespace legevo;

namespace {

std::string slurp(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE_BEGIN("mesh");

TEST_CASE("single voxel becomes a cube") {
  VoxelGrid grid;
  grid.set(3, 5, 7);
  const TriangleMesh mesh = extract_surface(grid);
  CHECK(mesh.vertices.size() == 8);
  CHECK(mesh.triangles.size() == 12);
  CHECK(signed_volume(mesh) == doctest::Approx(125.0).epsilon(1e-12));
  CHECK(oracles::every_edge_shared_by_two(mesh));
}

TEST_CASE("two-voxel bar has ten exposed faces") {
  VoxelGrid grid;
  grid.set(4, 4, 4);
  grid.set(5, 4, 4);
  CHECK(oracles::exposed_face_count(grid) == 10);
  const TriangleMesh mesh = extract_surface(grid);
  CHECK(mesh.triangles.size() == 20);
  CHECK(signed_volume(mesh) == doctest::Approx(250.0).epsilon(1e-12));
}

TEST_CASE("full block surface") {
  VoxelGrid grid;
  grid.cells.set();
  const TriangleMesh mesh = extract_surface(grid);
  CHECK(mesh.triangles.size() == 5120);
  CHECK(mesh.triangles.size() == 2 * static_cast<size_t>(oracles::exposed_face_count(grid)));
  CHECK(signed_volume(mesh) ==
        doctest::Approx(static_cast<double>(VoxelGrid::kCells) * 125.0).epsilon(1e-9));
}

TEST_CASE("empty grid is an error") {
  CHECK_THROWS_WITH_AS(extract_surface(VoxelGrid{}), "empty phenotype", std::runtime_error);
}

TEST_CASE("edge- and corner-touching voxels still make a closed surface") {
  SUBCASE("edge touch") {
    VoxelGrid grid;
    grid.set(0, 0, 0);
    grid.set(1, 0, 1);
    const TriangleMesh mesh = extract_surface(grid);
    // Two of the twelve quads carry a pinch midpoint and triangulate into
    // three triangles instead of two.
    CHECK(mesh.triangles.size() == 26);
    CHECK(oracles::every_edge_shared_by_two(mesh));
    CHECK(signed_volume(mesh) == doctest::Approx(250.0).epsilon(1e-12));
  }
  SUBCASE("corner touch") {
    VoxelGrid grid;
    grid.set(0, 0, 0);
    grid.set(1, 1, 1);
    const TriangleMesh mesh = extract_surface(grid);
    CHECK(oracles::every_edge_shared_by_two(mesh));
    CHECK(signed_volume(mesh) == doctest::Approx(250.0).epsilon(1e-12));
  }
  SUBCASE("edge touch bridged by a third voxel") {
    VoxelGrid grid;
    grid.set(0, 0, 0);
    grid.set(1, 0, 1);
    grid.set(1, 0, 0);
    const TriangleMesh mesh = extract_surface(grid);
    CHECK(oracles::every_edge_shared_by_two(mesh));
    CHECK(signed_volume(mesh) == doctest::Approx(375.0).epsilon(1e-12));
  }
}

TEST_CASE("random phenotypes are closed and volume-exact") {
  Rng rng(321);
  for (int i = 0; i < 25; ++i) {
    const VoxelGrid grid = rasterize(rescale_to_full_length(random_genome(rng)));
    const TriangleMesh mesh = extract_surface(grid);
    CHECK(oracles::every_edge_shared_by_two(mesh));
    const double expected = grid.occupied_count() * 125.0;
    CHECK(std::abs(signed_volume(mesh) - expected) <= 1e-6 * expected);
    // Pinch midpoints can only add triangles beyond the two per face.
    CHECK(mesh.triangles.size() >= 2 * static_cast<size_t>(oracles::exposed_face_count(grid)));
  }
}

TEST_CASE("smoothing") {
  VoxelGrid grid;
  grid.set(8, 8, 8);
  const TriangleMesh cube = extract_surface(grid);

  SUBCASE("zero iterations is the identity") {
    const TriangleMesh same = smooth(cube, 0, 0.5);
    CHECK(same.vertices == cube.vertices);
    CHECK(same.triangles == cube.triangles);
  }

  SUBCASE("one iteration pulls the cube inward") {
    const TriangleMesh shrunk = smooth(cube, 1, 0.5);
    CHECK(shrunk.vertices.size() == cube.vertices.size());
    CHECK(shrunk.triangles.size() == cube.triangles.size());

    auto bbox = [](const TriangleMesh& m) {
      Vec3 lo = m.vertices[0], hi = m.vertices[0];
      for (const Vec3& v : m.vertices) {
        lo = {std::min(lo.x, v.x), std::min(lo.y, v.y), std::min(lo.z, v.z)};
        hi = {std::max(hi.x, v.x), std::max(hi.y, v.y), std::max(hi.z, v.z)};
      }
      return hi - lo;
    };
    const Vec3 before = bbox(cube);
    const Vec3 after = bbox(shrunk);
    CHECK(after.x < before.x);
    CHECK(after.y < before.y);
    CHECK(after.z < before.z);
  }

  SUBCASE("topology survives many iterations") {
    Rng rng(2);
    const VoxelGrid leg = rasterize(rescale_to_full_length(random_genome(rng)));
    const TriangleMesh mesh = extract_surface(leg);
    const TriangleMesh smoothed = smooth(mesh, 5, 0.3);
    CHECK(smoothed.vertices.size() == mesh.vertices.size());
    CHECK(smoothed.triangles == mesh.triangles);
  }
}

TEST_CASE("obj output for a cube") {
  VoxelGrid grid;
  grid.set(0, 0, 0);
  const TriangleMesh mesh = extract_surface(grid);
  const auto path = std::filesystem::temp_directory_path() / "legevo_cube.obj";
  write_obj(mesh, path);
  const std::string text = slurp(path);
  std::filesystem::remove(path);

  int v_lines = 0;
  int f_lines = 0;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.starts_with("v ")) ++v_lines;
    if (line.starts_with("f ")) ++f_lines;
  }
  CHECK(v_lines == 8);
  CHECK(f_lines == 12);
}

TEST_CASE("obj round-trip preserves geometry") {
  Rng rng(14);
  const VoxelGrid grid = rasterize(rescale_to_full_length(random_genome(rng)));
  const TriangleMesh mesh = extract_surface(grid);
  const auto path = std::filesystem::temp_directory_path() / "legevo_leg.obj";
  write_obj(mesh, path);
  const oracles::ObjData back = oracles::read_obj(slurp(path));
  std::filesystem::remove(path);

  REQUIRE(back.vertices.size() == mesh.vertices.size());
  REQUIRE(back.triangles.size() == mesh.triangles.size());

  auto coordinate_triples = [](const std::vector<Vec3>& vs,
                               const std::vector<std::array<int, 3>>& tris) {
    std::vector<std::array<double, 9>> out;
    for (const auto& t : tris) {
      std::array<double, 9> flat{vs[t[0]].x, vs[t[0]].y, vs[t[0]].z, vs[t[1]].x, vs[t[1]].y,
                                 vs[t[1]].z, vs[t[2]].x, vs[t[2]].y, vs[t[2]].z};
      out.push_back(flat);
    }
    std::sort(out.begin(), out.end());
    return out;
  };
  CHECK(coordinate_triples(back.vertices, back.triangles) ==
        coordinate_triples(mesh.vertices, mesh.triangles));
}

TEST_CASE("binary stl has the exact documented size") {
  VoxelGrid grid;
  grid.set(0, 0, 0);
  const TriangleMesh cube = extract_surface(grid);
  const auto path = std::filesystem::temp_directory_path() / "legevo_cube.stl";
  write_stl(cube, path);
  CHECK(std::filesystem::file_size(path) == 84 + 12 * 50);
  std::filesystem::remove(path);

  Rng rng(15);
  const VoxelGrid leg = rasterize(rescale_to_full_length(random_genome(rng)));
  const TriangleMesh mesh = extract_surface(leg);
  write_stl(mesh, path);
  CHECK(std::filesystem::file_size(path) == 84 + mesh.triangles.size() * 50);
  std::filesystem::remove(path);
}

TEST_SUITE_END();
