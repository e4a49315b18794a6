#include "legevo/ga.hpp"

#include <algorithm>
#include <cassert>
#include <numeric>
#include <stdexcept>

#include "legevo/util.hpp"

namespace legevo {

namespace {

double clamp_coord(double v, double max) { return std::clamp(v, 0.0, max); }

BezierSpline random_spline(Rng& rng) {
  std::uniform_int_distribution<int> point_count(bounds::kMinControlPoints,
                                                 bounds::kMaxControlPoints);
  std::uniform_int_distribution<int> thickness(bounds::kMinThickness, bounds::kMaxThickness);
  std::uniform_real_distribution<double> ux(0.0, bounds::kMaxX);
  std::uniform_real_distribution<double> uy(0.0, bounds::kMaxY);
  std::uniform_real_distribution<double> uz(0.0, bounds::kMaxZ);

  BezierSpline spline;
  spline.thickness = thickness(rng);
  const int n_points = point_count(rng);
  spline.control_points.reserve(n_points);
  for (int p = 0; p < n_points; ++p) {
    spline.control_points.push_back({ux(rng), uy(rng), uz(rng)});
  }
  return spline;
}

ControlPoint random_point(Rng& rng) {
  std::uniform_real_distribution<double> ux(0.0, bounds::kMaxX);
  std::uniform_real_distribution<double> uy(0.0, bounds::kMaxY);
  std::uniform_real_distribution<double> uz(0.0, bounds::kMaxZ);
  return {ux(rng), uy(rng), uz(rng)};
}

}  // namespace

int tournament_select(const std::vector<Individual>& population, int tournament_size, Rng& rng) {
  const int n = static_cast<int>(population.size());
  if (n < tournament_size) {
    throw std::invalid_argument("population smaller than tournament size");
  }
  // Partial Fisher-Yates for distinct candidate indices.
  std::vector<int> indices(n);
  std::iota(indices.begin(), indices.end(), 0);
  int best = -1;
  for (int k = 0; k < tournament_size; ++k) {
    std::uniform_int_distribution<int> pick(k, n - 1);
    std::swap(indices[k], indices[pick(rng)]);
    const int candidate = indices[k];
    if (best < 0 || population[candidate].fitness() < population[best].fitness() ||
        (population[candidate].fitness() == population[best].fitness() && candidate < best)) {
      best = candidate;
    }
  }
  return best;
}

LegGenome crossover_at(const LegGenome& p1, const LegGenome& p2, int c1, int c2) {
  assert(0 <= c1 && c1 <= c2);
  assert(c2 <= static_cast<int>(std::min(p1.splines.size(), p2.splines.size())));
  LegGenome child;
  child.splines.reserve(p1.splines.size());
  child.splines.insert(child.splines.end(), p1.splines.begin(), p1.splines.begin() + c1);
  child.splines.insert(child.splines.end(), p2.splines.begin() + c1, p2.splines.begin() + c2);
  child.splines.insert(child.splines.end(), p1.splines.begin() + c2, p1.splines.end());
  return child;
}

LegGenome crossover(const LegGenome& p1, const LegGenome& p2, Rng& rng) {
  const int m = static_cast<int>(std::min(p1.splines.size(), p2.splines.size()));
  std::uniform_int_distribution<int> cut(0, m);
  int c1 = cut(rng);
  int c2 = cut(rng);
  if (c1 > c2) std::swap(c1, c2);
  return crossover_at(p1, p2, c1, c2);
}

LegGenome mutate(const LegGenome& genome, const GAConfig& config, Rng& rng,
                 MutationReport* report) {
  LegGenome mutated = genome;
  mutated.id = 0;
  mutated.lineage.clear();

  std::normal_distribution<double> unit_normal(0.0, 1.0);
  const double sigma_x = config.sigma_fraction * bounds::kMaxX;
  const double sigma_y = config.sigma_fraction * bounds::kMaxY;
  const double sigma_z = config.sigma_fraction * bounds::kMaxZ;
  for (BezierSpline& spline : mutated.splines) {
    for (ControlPoint& p : spline.control_points) {
      p.x = clamp_coord(p.x + unit_normal(rng) * sigma_x, bounds::kMaxX);
      p.y = clamp_coord(p.y + unit_normal(rng) * sigma_y, bounds::kMaxY);
      p.z = clamp_coord(p.z + unit_normal(rng) * sigma_z, bounds::kMaxZ);
    }
  }

  std::uniform_real_distribution<double> coin(0.0, 1.0);
  auto pick_spline = [&](Rng& r) {
    std::uniform_int_distribution<int> pick(0, static_cast<int>(mutated.splines.size()) - 1);
    return pick(r);
  };

  if (coin(rng) < config.p_thickness) {
    BezierSpline& spline = mutated.splines[pick_spline(rng)];
    std::uniform_int_distribution<int> thickness(bounds::kMinThickness, bounds::kMaxThickness);
    spline.thickness = thickness(rng);
    if (report) report->thickness_redrawn = true;
  }

  if (coin(rng) < config.p_cp_structural) {
    BezierSpline& spline = mutated.splines[pick_spline(rng)];
    const int n = static_cast<int>(spline.control_points.size());
    if (coin(rng) < config.p_add_given_structural) {
      if (n < bounds::kMaxControlPoints) {
        std::uniform_int_distribution<int> at(0, n);
        spline.control_points.insert(spline.control_points.begin() + at(rng), random_point(rng));
        if (report) report->cp_added = true;
      } else if (report) {
        report->cp_change_skipped = true;
      }
    } else {
      if (n > bounds::kMinControlPoints) {
        std::uniform_int_distribution<int> at(0, n - 1);
        spline.control_points.erase(spline.control_points.begin() + at(rng));
        if (report) report->cp_removed = true;
      } else if (report) {
        report->cp_change_skipped = true;
      }
    }
  }

  if (coin(rng) < config.p_spline_structural) {
    const int n = static_cast<int>(mutated.splines.size());
    if (coin(rng) < config.p_add_given_structural) {
      if (n < bounds::kMaxSplines) {
        BezierSpline spline = random_spline(rng);
        std::uniform_int_distribution<int> at(0, n);
        mutated.splines.insert(mutated.splines.begin() + at(rng), std::move(spline));
        if (report) report->spline_added = true;
      } else if (report) {
        report->spline_change_skipped = true;
      }
    } else {
      if (n > bounds::kMinSplines) {
        std::uniform_int_distribution<int> at(0, n - 1);
        mutated.splines.erase(mutated.splines.begin() + at(rng));
        if (report) report->spline_removed = true;
      } else if (report) {
        report->spline_change_skipped = true;
      }
    }
  }

  return mutated;
}

namespace {

EvaluationResult safe_evaluate(const Evaluator& evaluate, const LegGenome& genome) {
  try {
    return evaluate(genome);
  } catch (const std::exception& e) {
    EvaluationResult failed;
    failed.rejected = true;
    failed.reject_reason = std::string("evaluation failure: ") + e.what();
    failed.fitness = kSentinelFitness;
    return failed;
  }
}

void rank(std::vector<Individual>& population) {
  std::sort(population.begin(), population.end(), [](const Individual& a, const Individual& b) {
    if (a.fitness() != b.fitness()) return a.fitness() < b.fitness();
    if (a.birth_generation != b.birth_generation) return a.birth_generation < b.birth_generation;
    return a.genome.id < b.genome.id;
  });
}

}  // namespace

void init_population(GAState& state, const Evaluator& evaluate, int concurrency) {
  state.population.clear();
  state.population.reserve(state.config.pop_size);
  for (int i = 0; i < state.config.pop_size; ++i) {
    Rng rng = make_stream(state.config.master_seed, state.repeat_index, 0, i);
    Individual individual;
    individual.genome = random_genome(rng, state.next_id++);
    individual.birth_generation = 0;
    state.population.push_back(std::move(individual));
  }
  parallel_for(state.config.pop_size, concurrency, [&](int i) {
    state.population[i].result = safe_evaluate(evaluate, state.population[i].genome);
  });
  state.evaluations += state.config.pop_size;
  rank(state.population);
}

void run_generation(GAState& state, const Evaluator& evaluate, int concurrency) {
  const int next_generation = state.generation + 1;
  std::vector<Individual> children;
  children.reserve(state.config.children_per_gen);
  for (int idx = 0; idx < state.config.children_per_gen; ++idx) {
    Rng rng = make_stream(state.config.master_seed, state.repeat_index, next_generation, idx);
    const int p1 = tournament_select(state.population, state.config.tournament_size, rng);
    const int p2 = tournament_select(state.population, state.config.tournament_size, rng);
    LegGenome genome =
        crossover(state.population[p1].genome, state.population[p2].genome, rng);
    genome = mutate(genome, state.config, rng);
    genome.id = state.next_id++;
    genome.lineage = {state.population[p1].genome.id, state.population[p2].genome.id};

    Individual child;
    child.genome = std::move(genome);
    child.birth_generation = next_generation;
    children.push_back(std::move(child));
  }

  parallel_for(static_cast<int>(children.size()), concurrency, [&](int i) {
    children[i].result = safe_evaluate(evaluate, children[i].genome);
  });
  state.evaluations += children.size();

  state.population.insert(state.population.end(), std::make_move_iterator(children.begin()),
                          std::make_move_iterator(children.end()));
  rank(state.population);
  state.population.resize(state.config.pop_size);
  state.generation = next_generation;
}

}  // namespace legevo
