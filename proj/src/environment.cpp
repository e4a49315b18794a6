#include "legevo/environment.hpp"

namespace legevo {

const char* to_string(EnvironmentKind kind) {
  switch (kind) {
    case EnvironmentKind::kSoil: return "soil";
    case EnvironmentKind::kGravel: return "gravel";
    case EnvironmentKind::kFluid: return "fluid";
  }
  return "unknown";
}

std::optional<EnvironmentKind> parse_environment_kind(std::string_view name) {
  if (name == "soil") return EnvironmentKind::kSoil;
  if (name == "gravel") return EnvironmentKind::kGravel;
  if (name == "fluid") return EnvironmentKind::kFluid;
  return std::nullopt;
}

EnvironmentModel EnvironmentModel::soil() { return make(EnvironmentKind::kSoil); }
EnvironmentModel EnvironmentModel::gravel() { return make(EnvironmentKind::kGravel); }
EnvironmentModel EnvironmentModel::fluid() { return make(EnvironmentKind::kFluid); }

EnvironmentModel EnvironmentModel::make(EnvironmentKind kind) {
  EnvironmentModel env;
  env.kind = kind;
  return env;
}

EnvironmentModel EnvironmentModel::with_resistance_scaled(double c) const {
  EnvironmentModel scaled = *this;
  scaled.k_soil *= c;
  scaled.c_soil *= c;
  scaled.k_gravel *= c;
  scaled.deficit_gain *= c;
  scaled.drag_cd *= c;
  return scaled;
}

Vec3 medium_force(const EnvironmentModel& env, const MediumQuery& query) {
  const double depth_below_surface = env.medium_depth - query.position.z;
  if (depth_below_surface <= 0.0) return {};

  const double speed = norm(query.velocity);
  if (speed < env.v_eps) return {};

  const double depth =
      query.effective_depth >= 0.0 ? query.effective_depth : depth_below_surface;

  double magnitude = 0.0;
  switch (env.kind) {
    case EnvironmentKind::kSoil:
      magnitude = env.k_soil * depth * query.exposed_area + env.c_soil * query.exposed_area * speed;
      break;
    case EnvironmentKind::kGravel:
      magnitude = env.k_gravel * depth * query.frontal_area;
      break;
    case EnvironmentKind::kFluid:
      magnitude = 0.5 * env.rho_fluid * env.drag_cd * query.frontal_area * speed * speed;
      break;
  }
  return query.velocity * (-magnitude / speed);
}

}  // namespace legevo
