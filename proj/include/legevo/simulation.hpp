#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "legevo/environment.hpp"
#include "legevo/genome.hpp"
#include "legevo/structural.hpp"
#include "legevo/vec3.hpp"
#include "legevo/voxel_grid.hpp"
#include "legevo/voxelizer.hpp"

namespace legevo {

// Worst-possible fitness, assigned to structurally rejected legs so that
// ranking stays total.
inline constexpr double kSentinelFitness = 1e9;

struct JointAngles {
  double coxa = 0.0;   // rad, yaw about the vertical hip axis
  double femur = 0.0;  // rad, elevation above horizontal
  double tibia = 0.0;  // rad, pitch relative to the femur
};

// One commanded stride: the coxa sweeps +30 deg to -30 deg linearly, the
// femur starts elevated 30 deg, lowers to neutral at midstride and raises
// back, and the tibia mirrors the femur (starts declined 30 deg).
struct JointTrajectory {
  int n_steps = 3000;
  double dt = 0.001;  // s

  // Angles at a step in [0, n_steps]; throws std::domain_error outside.
  JointAngles at(int step) const;
  // Joint rates (rad/s) of the segment containing the step; the second
  // half-stride segment applies from midstride on.
  JointAngles rates_at(int step) const;
};

// Hip -> coxa (yaw) -> femur (pitch) -> tibia (pitch) chain. The voxel
// grid rides rigidly on the femur tip, x/z cross-section centered on the
// knee, hanging down toward the foot: the actuator-side layer iy = 31 sits
// at the knee and the foot-tip layer iy = 0 at the bottom.
struct KinematicChain {
  double coxa_link = 0.05;   // m
  double femur_link = 0.10;  // m
  double hip_height = 0.18;  // m above the container floor

  static constexpr double tibia_length() {
    return VoxelGrid::kNy * VoxelGrid::kVoxelEdgeMm * 1e-3;  // 0.16 m
  }
  static constexpr double voxel_edge() { return VoxelGrid::kVoxelEdgeMm * 1e-3; }
  static constexpr double face_area() { return voxel_edge() * voxel_edge(); }
};

// Exposed-face bits in the tibia frame, where +y points down toward the
// foot tip (grid layer iy - 1 direction).
enum : std::uint8_t {
  kFacePosX = 1u << 0,
  kFaceNegX = 1u << 1,
  kFacePosY = 1u << 2,
  kFaceNegY = 1u << 3,
  kFacePosZ = 1u << 4,
  kFaceNegZ = 1u << 5,
};

// Pose-independent description of one surface voxel (>= 1 exposed face).
// Interior voxels never contact the medium and are dropped up front.
struct SurfaceVoxel {
  Vec3 local;  // m, tibia frame (center of the voxel)
  std::uint8_t exposed_mask = 0;
  double exposed_area = 0.0;  // m^2
};

std::vector<SurfaceVoxel> surface_voxels(const VoxelGrid& grid);

// World-frame joint centers, axes, tibia frame and angular velocities for
// one commanded pose.
struct ChainPose {
  Vec3 hip, femur_joint, tibia_joint;
  Vec3 coxa_axis;   // vertical
  Vec3 pitch_axis;  // horizontal, perpendicular to the leg plane
  Vec3 ex, ey, ez;  // world directions of the tibia-local axes
  Vec3 omega_coxa, omega_femur, omega_tibia;
};

ChainPose chain_pose(const KinematicChain& chain, const JointAngles& angles,
                     const JointAngles& rates);

struct VoxelKinematics {
  Vec3 position;  // m
  Vec3 velocity;  // m/s
};

// Magnitude of the joint-axis projection of the torque a force applied at
// `at` exerts about a joint center; zero when the force passes through the
// joint.
inline double joint_torque_magnitude(const Vec3& axis, const Vec3& joint, const Vec3& at,
                                     const Vec3& force) {
  return std::abs(dot(axis, cross(at - joint, force)));
}

// Rigid-body positions and velocities of the grid's surface voxels for one
// pose; velocities come from the chain's instantaneous joint rates.
std::vector<VoxelKinematics> surface_voxel_kinematics(const KinematicChain& chain,
                                                      const VoxelGrid& grid,
                                                      const JointAngles& angles,
                                                      const JointAngles& rates);

struct EvaluationResult {
  double tau = 0.0;    // N*m summed over joints and steps
  double delta = 0.0;  // percent occupied voxels
  double fitness = 0.0;
  int n_steps = 0;
  bool rejected = false;
  std::string reject_reason;
  int occupied_count = 0;
  std::array<std::vector<double>, 3> joint_traces;  // coxa/femur/tibia, when recorded
};

// tau/n plus the material-usage term; exact arithmetic shape matters to
// downstream checks, so keep it in one place.
inline double fitness_from(double tau, int n_steps, double delta) {
  const double per_step = tau / n_steps;
  return per_step + per_step * (delta / 5.0);
}

struct EvalConfig {
  KinematicChain chain;
  StructuralConfig structural;
  RasterConfig raster;
  JointTrajectory trajectory;
  bool record_traces = false;
};

// Canonical genotype-to-phenotype pipeline: rescale -> rasterize ->
// stress filter. Throws DegenerateGenome for zero-length genomes.
VoxelGrid phenotype(const LegGenome& genome, const EvalConfig& config = {});

// Full stride evaluation. Structurally rejected legs receive the sentinel
// fitness. Pure and deterministic: identical genomes produce bit-identical
// results regardless of evaluation concurrency.
EvaluationResult evaluate_leg(const LegGenome& genome, const EnvironmentModel& env,
                              const EvalConfig& config = {});

}  // namespace legevo
