#include "legevo/voxelizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace legevo {

namespace {

constexpr double kExtentEpsilon = 1e-9;
constexpr int kMaxRescalePasses = 32;

struct YExtent {
  double min = std::numeric_limits<double>::infinity();
  double max = -std::numeric_limits<double>::infinity();
};

YExtent sampled_y_extent(const LegGenome& genome, int n_samples) {
  YExtent extent;
  for (const BezierSpline& spline : genome.splines) {
    for (int i = 0; i < n_samples; ++i) {
      const double t = static_cast<double>(i) / (n_samples - 1);
      const double y = evaluate_bezier(spline, t).y;
      extent.min = std::min(extent.min, y);
      extent.max = std::max(extent.max, y);
    }
  }
  return extent;
}

int clamp_index(double coord, int n) {
  int idx = static_cast<int>(std::floor(coord));
  return std::clamp(idx, 0, n - 1);
}

}  // namespace

LegGenome rescale_to_full_length(const LegGenome& genome, const RasterConfig& config) {
  YExtent extent = sampled_y_extent(genome, config.samples_per_spline);
  if (extent.max - extent.min <= kExtentEpsilon) {
    throw DegenerateGenome("degenerate length: sampled y-extent is zero");
  }

  LegGenome scaled = genome;
  for (int pass = 0; pass < kMaxRescalePasses; ++pass) {
    if (std::abs(extent.min) <= kExtentEpsilon &&
        std::abs(extent.max - bounds::kMaxY) <= kExtentEpsilon) {
      break;
    }
    const double scale = bounds::kMaxY / (extent.max - extent.min);
    for (BezierSpline& spline : scaled.splines) {
      for (ControlPoint& p : spline.control_points) {
        p.y = std::clamp((p.y - extent.min) * scale, 0.0, bounds::kMaxY);
      }
    }
    extent = sampled_y_extent(scaled, config.samples_per_spline);
    if (extent.max - extent.min <= kExtentEpsilon) {
      throw DegenerateGenome("degenerate length: sampled y-extent collapsed");
    }
  }
  return scaled;
}

VoxelGrid rasterize(const LegGenome& genome, const RasterConfig& config) {
  VoxelGrid grid;
  const int n_samples = config.samples_per_spline;
  for (const BezierSpline& spline : genome.splines) {
    const double radius = spline.thickness * 0.5;
    const double radius_sq = radius * radius;
    for (int i = 0; i < n_samples; ++i) {
      const double t = static_cast<double>(i) / (n_samples - 1);
      const Vec3 p = evaluate_bezier(spline, t);

      grid.set(clamp_index(p.x, VoxelGrid::kNx), clamp_index(p.y, VoxelGrid::kNy),
               clamp_index(p.z, VoxelGrid::kNz));

      if (spline.thickness <= 1) continue;  // ball adds nothing beyond the containing voxel

      const int x_lo = std::max(0, static_cast<int>(std::floor(p.x - radius - 0.5)));
      const int x_hi = std::min(VoxelGrid::kNx - 1, static_cast<int>(std::ceil(p.x + radius - 0.5)));
      const int y_lo = std::max(0, static_cast<int>(std::floor(p.y - radius - 0.5)));
      const int y_hi = std::min(VoxelGrid::kNy - 1, static_cast<int>(std::ceil(p.y + radius - 0.5)));
      const int z_lo = std::max(0, static_cast<int>(std::floor(p.z - radius - 0.5)));
      const int z_hi = std::min(VoxelGrid::kNz - 1, static_cast<int>(std::ceil(p.z + radius - 0.5)));
      for (int iy = y_lo; iy <= y_hi; ++iy) {
        for (int iz = z_lo; iz <= z_hi; ++iz) {
          for (int ix = x_lo; ix <= x_hi; ++ix) {
            const double dx = ix + 0.5 - p.x;
            const double dy = iy + 0.5 - p.y;
            const double dz = iz + 0.5 - p.z;
            if (dx * dx + dy * dy + dz * dz <= radius_sq) grid.set(ix, iy, iz);
          }
        }
      }
    }
  }
  return grid;
}

}  // namespace legevo
