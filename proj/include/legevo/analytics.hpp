#pragma once

#include <string>
#include <vector>

#include "legevo/environment.hpp"
#include "legevo/ga.hpp"
#include "legevo/voxel_grid.hpp"

namespace legevo {

// Order statistics and moments of the non-rejected fitnesses of one
// evaluated population. Rejected (sentinel) individuals are excluded from
// best/mean/worst/stddev and surface only in reject_count.
struct GenerationStats {
  int generation = 0;
  double best = 0.0;
  double mean = 0.0;
  double worst = 0.0;
  double stddev = 0.0;  // population standard deviation
  int reject_count = 0;
  int best_voxel_count = 0;
  bool all_rejected = false;
};

GenerationStats generation_stats(const std::vector<Individual>& population, int generation = 0);

struct Matrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<double>> values;
};

// Best legs of the runs trained in one environment.
struct BestLegSet {
  std::string label;
  EnvironmentModel env;
  std::vector<LegGenome> legs;
};

// Entry (r, c) = mean fitness of row-set legs re-evaluated in the column
// set's environment, via the exact same evaluation used during evolution.
Matrix cross_evaluate(const std::vector<BestLegSet>& sets, const EvalConfig& config,
                      int concurrency = 1);

struct LabeledGrid {
  std::string label;
  VoxelGrid grid;
};

// Pairwise agreement percentages; symmetric with a diagonal of 100.
Matrix similarity_matrix(const std::vector<LabeledGrid>& grids);
// Secondary overlap metric on the same legs.
Matrix jaccard_matrix(const std::vector<LabeledGrid>& grids);

// One row per generation >= 1 (the evaluated initial population is
// generation 0 and is not a row).
std::string stats_csv(const std::vector<GenerationStats>& history);
std::string matrix_csv(const Matrix& matrix);

std::vector<GenerationStats> parse_stats_csv(const std::string& text);

}  // namespace legevo
