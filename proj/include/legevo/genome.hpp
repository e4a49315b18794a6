#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "legevo/rng.hpp"
#include "legevo/vec3.hpp"

namespace legevo {

// Genotype bounds. Coordinates are continuous reals inside the stated
// ranges; the ranges are bounds, not lattices.
namespace bounds {
inline constexpr double kMaxX = 16.0;
inline constexpr double kMaxY = 32.0;  // leg length axis
inline constexpr double kMaxZ = 16.0;
inline constexpr int kMinControlPoints = 3;
inline constexpr int kMaxControlPoints = 8;
inline constexpr int kMinThickness = 1;
inline constexpr int kMaxThickness = 3;
inline constexpr int kMinSplines = 5;
inline constexpr int kMaxSplines = 10;
}  // namespace bounds

using ControlPoint = Vec3;

struct BezierSpline {
  std::vector<ControlPoint> control_points;  // ordered, 3..8 points
  int thickness = 1;                         // voxels, 1..3

  bool operator==(const BezierSpline&) const = default;
};

// The evolvable unit: a bundle of thickened Bezier curves. Immutable by
// convention after construction; safe to share between evaluator threads.
struct LegGenome {
  std::uint64_t id = 0;
  std::vector<std::uint64_t> lineage;  // parent ids, bookkeeping only
  std::vector<BezierSpline> splines;   // ordered, 5..10 splines

  bool operator==(const LegGenome&) const = default;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Returns a description of the first violated genome invariant, or nullopt
// if the genome is well-formed.
std::optional<std::string> invariant_violation(const LegGenome& genome);

// Point on the curve at parameter t in [0,1] (Bernstein form, evaluated by
// De Casteljau subdivision). Throws std::domain_error for t outside [0,1].
Vec3 evaluate_bezier(const BezierSpline& spline, double t);

// Uniform draw within all genotype bounds: spline count on {5..10}, control
// point count on {3..8}, thickness on {1,2,3}, coordinates on their ranges.
LegGenome random_genome(Rng& rng, std::uint64_t id = 0);

// Versioned line-oriented text record; round-trips exactly (coordinates are
// written with shortest-round-trip precision).
std::string serialize(const LegGenome& genome);

// Throws ParseError naming the offending field for malformed or
// out-of-range records.
LegGenome deserialize(const std::string& text);

void write_genome_file(const LegGenome& genome, const std::filesystem::path& path);
LegGenome read_genome_file(const std::filesystem::path& path);

}  // namespace legevo
