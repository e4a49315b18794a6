#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "legevo/vec3.hpp"

namespace legevo {

enum class EnvironmentKind { kSoil, kGravel, kFluid };

const char* to_string(EnvironmentKind kind);
std::optional<EnvironmentKind> parse_environment_kind(std::string_view name);

// Analytic resistive-force medium. The medium fills z in [0, medium_depth]
// (container floor at z = 0). Resistance coefficients enter the produced
// force linearly; the support-balance parameters shape gravel kinematics
// and are deliberately not part of that scaling.
struct EnvironmentModel {
  EnvironmentKind kind = EnvironmentKind::kSoil;

  // Resistance coefficients.
  double k_soil = 5e5;        // N/m^3, pressure-sinkage resistance
  double c_soil = 1e3;        // N*s/m^3, shear against the wetted area
  double k_gravel = 2e5;      // N/m^3, granular plowing per depth
  double deficit_gain = 1.0;  // unitless, scales the unsupported-load force
  double drag_cd = 1.0;       // unitless, quadratic drag coefficient

  // Medium constants.
  double rho_fluid = 1000.0;       // kg/m^3
  double support_bearing_k = 2e6;  // N/m^3, gravel bearing modulus
  double nominal_load = 60.0;      // N, the leg's share of body weight
  double medium_depth = 0.07;      // m
  double v_eps = 1e-6;             // m/s, below this no drag applies

  static EnvironmentModel soil();
  static EnvironmentModel gravel();
  static EnvironmentModel fluid();
  static EnvironmentModel make(EnvironmentKind kind);

  // All resistance coefficients multiplied by c; accumulated torque scales
  // by exactly c in turn.
  EnvironmentModel with_resistance_scaled(double c) const;
};

// One surface voxel's contact state. frontal_area is the velocity-facing
// projection of the exposed faces; effective_depth < 0 means "depth below
// the nominal surface" (the gravel support balance passes an adjusted
// engagement depth instead).
struct MediumQuery {
  Vec3 position;  // m
  Vec3 velocity;  // m/s
  double exposed_area = 0.0;    // m^2
  double frontal_area = 0.0;    // m^2
  double effective_depth = -1.0;  // m
};

// Resistive force opposing the velocity; zero above the surface and below
// the velocity threshold. Soil resists on the full wetted area, gravel
// plows with the frontal projection proportional to depth, fluid applies
// quadratic drag on the frontal projection.
Vec3 medium_force(const EnvironmentModel& env, const MediumQuery& query);

}  // namespace legevo
