#include "legevo/simulation.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace legevo {

namespace {

constexpr double kAmplitudeRad = 30.0 * std::numbers::pi / 180.0;

double lerp_down_up(double amplitude, int step, int n_steps) {
  // amplitude -> 0 at midstride -> amplitude, piecewise linear.
  const int half = n_steps / 2;
  if (step <= half) {
    return amplitude * (1.0 - static_cast<double>(step) / half);
  }
  return amplitude * (static_cast<double>(step - half) / (n_steps - half));
}

}  // namespace

JointAngles JointTrajectory::at(int step) const {
  if (step < 0 || step > n_steps) {
    throw std::domain_error("trajectory step out of range: " + std::to_string(step));
  }
  JointAngles angles;
  angles.coxa = kAmplitudeRad * (1.0 - 2.0 * step / n_steps);
  angles.femur = lerp_down_up(kAmplitudeRad, step, n_steps);
  angles.tibia = -lerp_down_up(kAmplitudeRad, step, n_steps);
  return angles;
}

JointAngles JointTrajectory::rates_at(int step) const {
  if (step < 0 || step > n_steps) {
    throw std::domain_error("trajectory step out of range: " + std::to_string(step));
  }
  const double stride_time = n_steps * dt;
  const double half_time = stride_time / 2.0;
  JointAngles rates;
  rates.coxa = -2.0 * kAmplitudeRad / stride_time;
  const double femur_rate = kAmplitudeRad / half_time;
  if (step < n_steps / 2) {
    rates.femur = -femur_rate;
    rates.tibia = femur_rate;
  } else {
    rates.femur = femur_rate;
    rates.tibia = -femur_rate;
  }
  return rates;
}

std::vector<SurfaceVoxel> surface_voxels(const VoxelGrid& grid) {
  const double edge = KinematicChain::voxel_edge();
  const double face_area = KinematicChain::face_area();
  const double half_x = VoxelGrid::kNx * edge / 2.0;
  const double half_z = VoxelGrid::kNz * edge / 2.0;

  std::vector<SurfaceVoxel> result;
  for (int iy = 0; iy < VoxelGrid::kNy; ++iy) {
    for (int iz = 0; iz < VoxelGrid::kNz; ++iz) {
      for (int ix = 0; ix < VoxelGrid::kNx; ++ix) {
        if (!grid.at(ix, iy, iz)) continue;
        auto exposed = [&](int dx, int dy, int dz) {
          const int nx = ix + dx;
          const int ny = iy + dy;
          const int nz = iz + dz;
          return !VoxelGrid::in_bounds(nx, ny, nz) || !grid.at(nx, ny, nz);
        };
        // Tibia-frame +y points from the knee down toward the foot tip,
        // which is grid layer iy = 0: decreasing iy is "down".
        std::uint8_t mask = 0;
        if (exposed(+1, 0, 0)) mask |= kFacePosX;
        if (exposed(-1, 0, 0)) mask |= kFaceNegX;
        if (exposed(0, -1, 0)) mask |= kFacePosY;
        if (exposed(0, +1, 0)) mask |= kFaceNegY;
        if (exposed(0, 0, +1)) mask |= kFacePosZ;
        if (exposed(0, 0, -1)) mask |= kFaceNegZ;
        if (mask == 0) continue;

        SurfaceVoxel voxel;
        voxel.local = {(ix + 0.5) * edge - half_x, (VoxelGrid::kNy - iy - 0.5) * edge,
                       (iz + 0.5) * edge - half_z};
        voxel.exposed_mask = mask;
        voxel.exposed_area = std::popcount(mask) * face_area;
        result.push_back(voxel);
      }
    }
  }
  return result;
}

ChainPose chain_pose(const KinematicChain& chain, const JointAngles& angles,
                     const JointAngles& rates) {
  ChainPose pose;
  const double cos_c = std::cos(angles.coxa);
  const double sin_c = std::sin(angles.coxa);
  const Vec3 radial{cos_c, sin_c, 0.0};
  const Vec3 vertical{0.0, 0.0, 1.0};

  pose.coxa_axis = vertical;
  pose.pitch_axis = {-sin_c, cos_c, 0.0};

  pose.hip = {0.0, 0.0, chain.hip_height};
  pose.femur_joint = pose.hip + radial * chain.coxa_link;

  const Vec3 femur_dir = radial * std::cos(angles.femur) + vertical * std::sin(angles.femur);
  pose.tibia_joint = pose.femur_joint + femur_dir * chain.femur_link;

  // Tibia pitch is relative to the femur; pitch rotations share one axis,
  // so the tibia's absolute declination is their sum.
  const double psi = angles.femur + angles.tibia;
  pose.ey = radial * std::sin(psi) - vertical * std::cos(psi);  // down toward the foot tip
  pose.ez = pose.pitch_axis;
  pose.ex = cross(pose.ey, pose.ez);

  // Positive pitch elevates, which is a rotation about -pitch_axis.
  pose.omega_coxa = vertical * rates.coxa;
  pose.omega_femur = pose.pitch_axis * -rates.femur;
  pose.omega_tibia = pose.pitch_axis * -rates.tibia;
  return pose;
}

namespace {

Vec3 world_position(const ChainPose& pose, const Vec3& local) {
  return pose.tibia_joint + pose.ex * local.x + pose.ey * local.y + pose.ez * local.z;
}

Vec3 world_velocity(const ChainPose& pose, const Vec3& position) {
  return cross(pose.omega_coxa, position - pose.hip) +
         cross(pose.omega_femur, position - pose.femur_joint) +
         cross(pose.omega_tibia, position - pose.tibia_joint);
}

struct JointTorques {
  double coxa = 0.0;
  double femur = 0.0;
  double tibia = 0.0;

  double total() const { return coxa + femur + tibia; }
};

void add_force_torques(const ChainPose& pose, const Vec3& position, const Vec3& force,
                       JointTorques& torques) {
  torques.coxa += joint_torque_magnitude(pose.coxa_axis, pose.hip, position, force);
  torques.femur += joint_torque_magnitude(pose.pitch_axis, pose.femur_joint, position, force);
  torques.tibia += joint_torque_magnitude(pose.pitch_axis, pose.tibia_joint, position, force);
}

// World-frame outward normals of the exposed faces, in mask bit order.
std::array<Vec3, 6> face_normals(const ChainPose& pose) {
  return {pose.ex, -pose.ex, pose.ey, -pose.ey, pose.ez, -pose.ez};
}

double frontal_area(std::uint8_t mask, const std::array<Vec3, 6>& normals, const Vec3& v_hat) {
  double area = 0.0;
  for (int bit = 0; bit < 6; ++bit) {
    if (!(mask & (1u << bit))) continue;
    const double facing = dot(normals[bit], v_hat);
    if (facing > 0.0) area += facing;
  }
  return area * KinematicChain::face_area();
}

struct SubmergedVoxel {
  Vec3 position;
  Vec3 velocity;
  double speed = 0.0;
  double depth = 0.0;      // below the nominal surface
  double down_area = 0.0;  // m^2 of downward-facing exposed faces
  std::uint8_t mask = 0;
};

// Quasi-static gravel support: the leg settles until the bearing pressure
// integrated over its downward faces carries the nominal load. sink_depth
// is measured up from the deepest submerged point; whatever load the
// gravel cannot carry at full commanded depth is returned as deficit and
// loads the actuators directly.
struct GravelSupport {
  double sink_depth = 0.0;
  double max_depth = 0.0;
  double deficit = 0.0;
  Vec3 support_centroid;
  bool any_down_face = false;
};

GravelSupport gravel_support(const EnvironmentModel& env,
                             const std::vector<SubmergedVoxel>& submerged) {
  GravelSupport support;
  for (const SubmergedVoxel& v : submerged) {
    support.max_depth = std::max(support.max_depth, v.depth);
  }

  // (height above the deepest point, bearing area) pairs.
  std::vector<std::pair<double, double>> faces;
  double total_area = 0.0;
  Vec3 centroid{};
  for (const SubmergedVoxel& v : submerged) {
    if (v.down_area <= 0.0) continue;
    faces.emplace_back(support.max_depth - v.depth, v.down_area);
    total_area += v.down_area;
    centroid += v.position * v.down_area;
  }
  if (faces.empty()) {
    support.deficit = env.nominal_load;
    return support;
  }
  support.any_down_face = true;
  support.support_centroid = centroid * (1.0 / total_area);

  std::sort(faces.begin(), faces.end());
  const double required = env.nominal_load / env.support_bearing_k;  // m^3 equivalent

  double cum_area = 0.0;
  double cum_height_area = 0.0;
  for (size_t i = 0; i < faces.size(); ++i) {
    cum_area += faces[i].second;
    cum_height_area += faces[i].first * faces[i].second;
    const double next_height = (i + 1 < faces.size()) ? faces[i + 1].first : support.max_depth;
    const double sink = (required + cum_height_area) / cum_area;
    if (sink <= next_height) {
      support.sink_depth = sink;
      return support;
    }
  }
  // Not supported even at full commanded depth.
  support.sink_depth = support.max_depth;
  const double capacity =
      env.support_bearing_k * (support.max_depth * cum_area - cum_height_area);
  support.deficit = std::max(0.0, env.nominal_load - capacity);
  return support;
}

}  // namespace

std::vector<VoxelKinematics> surface_voxel_kinematics(const KinematicChain& chain,
                                                      const VoxelGrid& grid,
                                                      const JointAngles& angles,
                                                      const JointAngles& rates) {
  const ChainPose pose = chain_pose(chain, angles, rates);
  std::vector<VoxelKinematics> result;
  for (const SurfaceVoxel& voxel : surface_voxels(grid)) {
    VoxelKinematics k;
    k.position = world_position(pose, voxel.local);
    k.velocity = world_velocity(pose, k.position);
    result.push_back(k);
  }
  return result;
}

VoxelGrid phenotype(const LegGenome& genome, const EvalConfig& config) {
  const LegGenome scaled = rescale_to_full_length(genome, config.raster);
  return stress_filter(rasterize(scaled, config.raster), config.structural);
}

EvaluationResult evaluate_leg(const LegGenome& genome, const EnvironmentModel& env,
                              const EvalConfig& config) {
  EvaluationResult result;
  result.n_steps = config.trajectory.n_steps;

  auto reject = [&](const std::string& reason) {
    result.rejected = true;
    result.reject_reason = reason;
    result.fitness = kSentinelFitness;
    return result;
  };

  VoxelGrid grid;
  try {
    grid = phenotype(genome, config);
  } catch (const DegenerateGenome& e) {
    return reject(e.what());
  }
  if (!connectivity_gate(grid)) {
    return reject("top and bottom of the leg are not connected");
  }

  const OccupancyStats stats = occupancy_stats(grid);
  result.delta = stats.delta;
  result.occupied_count = stats.occupied_count;

  const std::vector<SurfaceVoxel> surface = surface_voxels(grid);
  double local_radius = 0.0;
  for (const SurfaceVoxel& v : surface) local_radius = std::max(local_radius, norm(v.local));

  if (config.record_traces) {
    for (auto& trace : result.joint_traces) trace.reserve(config.trajectory.n_steps);
  }

  std::vector<SubmergedVoxel> submerged;
  submerged.reserve(surface.size());

  double tau = 0.0;
  for (int step = 0; step < config.trajectory.n_steps; ++step) {
    const ChainPose pose =
        chain_pose(config.chain, config.trajectory.at(step), config.trajectory.rates_at(step));
    JointTorques torques;

    // Whole grid above the surface: nothing to do this step.
    if (pose.tibia_joint.z - local_radius <= env.medium_depth) {
      const std::array<Vec3, 6> normals = face_normals(pose);

      submerged.clear();
      bool any_moving = false;
      for (const SurfaceVoxel& voxel : surface) {
        SubmergedVoxel sv;
        sv.position = world_position(pose, voxel.local);
        sv.depth = env.medium_depth - sv.position.z;
        if (sv.depth <= 0.0) continue;
        sv.velocity = world_velocity(pose, sv.position);
        sv.speed = norm(sv.velocity);
        sv.mask = voxel.exposed_mask;
        for (int bit = 0; bit < 6; ++bit) {
          if ((sv.mask & (1u << bit)) && normals[bit].z < -0.5) {
            sv.down_area += KinematicChain::face_area();
          }
        }
        any_moving = any_moving || sv.speed >= env.v_eps;
        submerged.push_back(sv);
      }

      GravelSupport support;
      const bool gravel = env.kind == EnvironmentKind::kGravel;
      if (gravel && !submerged.empty() && any_moving) {
        support = gravel_support(env, submerged);
      }

      for (const SubmergedVoxel& sv : submerged) {
        if (sv.speed < env.v_eps) continue;
        MediumQuery query;
        query.position = sv.position;
        query.velocity = sv.velocity;
        const Vec3 v_hat = sv.velocity * (1.0 / sv.speed);
        query.frontal_area = frontal_area(sv.mask, normals, v_hat);
        query.exposed_area = std::popcount(sv.mask) * KinematicChain::face_area();
        if (gravel) {
          // Material above the engaged band rides through yielded gravel.
          const double height = support.max_depth - sv.depth;
          const double engaged = support.sink_depth - height;
          if (engaged <= 0.0) continue;
          query.effective_depth = engaged;
        }
        const Vec3 force = medium_force(env, query);
        if (force == Vec3{}) continue;
        add_force_torques(pose, sv.position, force, torques);
      }

      if (gravel && support.deficit > 0.0 && !submerged.empty() && any_moving) {
        const Vec3 at = support.any_down_face ? support.support_centroid : submerged[0].position;
        const Vec3 deficit_force{0.0, 0.0, -env.deficit_gain * support.deficit};
        add_force_torques(pose, at, deficit_force, torques);
      }
    }

    tau += torques.total();
    if (config.record_traces) {
      result.joint_traces[0].push_back(torques.coxa);
      result.joint_traces[1].push_back(torques.femur);
      result.joint_traces[2].push_back(torques.tibia);
    }
  }

  result.tau = tau;
  result.fitness = fitness_from(result.tau, result.n_steps, result.delta);
  return result;
}

}  // namespace legevo
