#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include "legevo/analytics.hpp"
#include "legevo/environment.hpp"
#include "legevo/ga.hpp"

namespace legevo {

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything a run needs, with defaults reproducing the standard protocol
// (population 20, 100 generations, the stride and gate parameters).
struct ExperimentConfig {
  EnvironmentModel env;
  GAConfig ga;
  KinematicChain chain;
  StructuralConfig structural;
  RasterConfig raster;
  JointTrajectory trajectory;

  int repeats = 10;
  int concurrency = 0;  // 0 = hardware threads
  std::string output_dir;  // empty: $LEGEVO_OUTPUT_DIR, then "runs"
  bool save_meshes = true;
  int smooth_iterations = 0;
  double smooth_lambda = 0.5;

  EvalConfig eval_config() const;
  int effective_concurrency() const;
  std::filesystem::path resolved_output_dir() const;
};

// Sectioned key = value text; unknown sections and keys are rejected, as
// are malformed values. '#' starts a comment.
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Canonical echo of every knob; parses back to an identical config.
std::string config_to_text(const ExperimentConfig& config);

// One evolutionary run (one repeat), in memory.
struct RunResult {
  int repeat = 0;
  std::uint64_t derived_seed = 0;
  std::vector<GenerationStats> history;  // index 0 = initial population
  std::vector<Individual> final_population;  // ranked best-first
  std::uint64_t evaluations = 0;

  const Individual* best() const;  // best non-rejected, or nullptr
};

RunResult run_single_repeat(const ExperimentConfig& config, int repeat);
std::vector<RunResult> run_repeats(const ExperimentConfig& config);

// Runs all repeats and writes the artifact tree:
//   <out>/config.cfg, <out>/manifest.txt,
//   <out>/repeat_NN/stats.csv, best.leg,
//   <out>/repeat_NN/final_population/leg_RR.leg (+ meshes/leg_RR.obj/.stl)
// A mid-run I/O failure writes <out>/PARTIAL_RUN and rethrows.
std::vector<RunResult> run_experiment(const ExperimentConfig& config);

// A best leg recovered from an artifact tree (any depth below root).
struct DiscoveredRun {
  EnvironmentKind kind = EnvironmentKind::kSoil;
  int repeat = 0;
  LegGenome best;
};

// Scans for manifest.txt files and loads each repeat's best.leg; sorted by
// (environment, repeat).
std::vector<DiscoveredRun> discover_best_legs(const std::filesystem::path& root);

}  // namespace legevo
