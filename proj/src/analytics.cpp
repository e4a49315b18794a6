#include "legevo/analytics.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "legevo/util.hpp"

namespace legevo {

GenerationStats generation_stats(const std::vector<Individual>& population, int generation) {
  GenerationStats stats;
  stats.generation = generation;

  const Individual* best = nullptr;
  double sum = 0.0;
  double worst = -std::numeric_limits<double>::infinity();
  int n = 0;
  for (const Individual& ind : population) {
    if (ind.result.rejected) {
      ++stats.reject_count;
      continue;
    }
    ++n;
    sum += ind.fitness();
    worst = std::max(worst, ind.fitness());
    if (!best || ind.fitness() < best->fitness()) best = &ind;
  }
  if (n == 0) {
    stats.all_rejected = true;
    return stats;
  }
  stats.best = best->fitness();
  stats.best_voxel_count = best->result.occupied_count;
  stats.mean = sum / n;
  stats.worst = worst;
  double var = 0.0;
  for (const Individual& ind : population) {
    if (ind.result.rejected) continue;
    const double d = ind.fitness() - stats.mean;
    var += d * d;
  }
  stats.stddev = std::sqrt(var / n);
  return stats;
}

Matrix cross_evaluate(const std::vector<BestLegSet>& sets, const EvalConfig& config,
                      int concurrency) {
  Matrix matrix;
  for (const BestLegSet& set : sets) {
    matrix.row_labels.push_back(set.label);
    matrix.col_labels.push_back(set.label);
  }

  struct Task {
    int row, col, leg;
  };
  std::vector<Task> tasks;
  for (int r = 0; r < static_cast<int>(sets.size()); ++r) {
    for (int c = 0; c < static_cast<int>(sets.size()); ++c) {
      for (int l = 0; l < static_cast<int>(sets[r].legs.size()); ++l) {
        tasks.push_back({r, c, l});
      }
    }
  }
  std::vector<double> fitnesses(tasks.size());
  parallel_for(static_cast<int>(tasks.size()), concurrency, [&](int i) {
    const Task& t = tasks[i];
    fitnesses[i] = evaluate_leg(sets[t.row].legs[t.leg], sets[t.col].env, config).fitness;
  });

  matrix.values.assign(sets.size(), std::vector<double>(sets.size(), 0.0));
  std::vector<std::vector<int>> counts(sets.size(), std::vector<int>(sets.size(), 0));
  for (size_t i = 0; i < tasks.size(); ++i) {
    matrix.values[tasks[i].row][tasks[i].col] += fitnesses[i];
    counts[tasks[i].row][tasks[i].col] += 1;
  }
  for (size_t r = 0; r < sets.size(); ++r) {
    for (size_t c = 0; c < sets.size(); ++c) {
      if (counts[r][c] > 0) matrix.values[r][c] /= counts[r][c];
    }
  }
  return matrix;
}

namespace {

Matrix pairwise_matrix(const std::vector<LabeledGrid>& grids,
                       double (*metric)(const VoxelGrid&, const VoxelGrid&)) {
  Matrix matrix;
  const size_t n = grids.size();
  for (const LabeledGrid& g : grids) {
    matrix.row_labels.push_back(g.label);
    matrix.col_labels.push_back(g.label);
  }
  matrix.values.assign(n, std::vector<double>(n, 0.0));
  for (size_t i = 0; i < n; ++i) {
    for (size_t j = i; j < n; ++j) {
      const double v = metric(grids[i].grid, grids[j].grid);
      matrix.values[i][j] = v;
      matrix.values[j][i] = v;
    }
  }
  return matrix;
}

}  // namespace

Matrix similarity_matrix(const std::vector<LabeledGrid>& grids) {
  return pairwise_matrix(grids, &voxel_similarity);
}

Matrix jaccard_matrix(const std::vector<LabeledGrid>& grids) {
  return pairwise_matrix(grids, &jaccard_similarity);
}

std::string stats_csv(const std::vector<GenerationStats>& history) {
  std::string out = "generation,best,mean,worst,stddev,reject_count,best_voxel_count\n";
  for (const GenerationStats& s : history) {
    if (s.generation < 1) continue;
    out += std::to_string(s.generation) + ',';
    if (s.all_rejected) {
      out += "nan,nan,nan,nan";
    } else {
      out += format_double(s.best) + ',' + format_double(s.mean) + ',' + format_double(s.worst) +
             ',' + format_double(s.stddev);
    }
    out += ',' + std::to_string(s.reject_count) + ',' + std::to_string(s.best_voxel_count) + '\n';
  }
  return out;
}

std::string matrix_csv(const Matrix& matrix) {
  std::string out;
  for (const std::string& label : matrix.col_labels) out += ',' + label;
  out += '\n';
  for (size_t r = 0; r < matrix.values.size(); ++r) {
    out += matrix.row_labels[r];
    for (double v : matrix.values[r]) out += ',' + format_double(v);
    out += '\n';
  }
  return out;
}

std::vector<GenerationStats> parse_stats_csv(const std::string& text) {
  std::vector<GenerationStats> history;
  std::istringstream in(text);
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (header) {
      header = false;
      continue;
    }
    std::istringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw std::runtime_error("stats CSV row with wrong column count");
    GenerationStats s;
    s.generation = std::stoi(cells[0]);
    s.best = std::stod(cells[1]);
    s.mean = std::stod(cells[2]);
    s.worst = std::stod(cells[3]);
    s.stddev = std::stod(cells[4]);
    s.reject_count = std::stoi(cells[5]);
    s.best_voxel_count = std::stoi(cells[6]);
    s.all_rejected = std::isnan(s.best);
    history.push_back(s);
  }
  return history;
}

}  // namespace legevo
