#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "legevo/genome.hpp"
#include "legevo/rng.hpp"
#include "legevo/simulation.hpp"

namespace legevo {

struct GAConfig {
  int pop_size = 20;
  int children_per_gen = 20;
  int generations = 100;
  int tournament_size = 4;
  double sigma_fraction = 0.10;        // of each coordinate's range
  double p_thickness = 0.2;            // thickness reinitialization
  double p_cp_structural = 0.2;        // control point add/remove
  double p_spline_structural = 0.1;    // spline add/remove
  double p_add_given_structural = 0.5; // add vs remove coin
  std::uint64_t master_seed = 1;
};

struct Individual {
  LegGenome genome;
  EvaluationResult result;
  int birth_generation = 0;

  double fitness() const { return result.fitness; }
};

using Evaluator = std::function<EvaluationResult(const LegGenome&)>;

// Minimization: draws `tournament_size` distinct individuals uniformly and
// returns the index of the lowest-fitness one, ties broken by lower
// population index. Throws std::invalid_argument when the population is
// smaller than the tournament.
int tournament_select(const std::vector<Individual>& population, int tournament_size, Rng& rng);

// Deterministic spline-level splice: child = p1[0,c1) ++ p2[c1,c2) ++
// p1[c2,end). Requires c1 <= c2 <= min(|p1|, |p2|); the child keeps p1's
// spline count.
LegGenome crossover_at(const LegGenome& p1, const LegGenome& p2, int c1, int c2);

// Two-point crossover with both cut points drawn uniformly within the
// shorter parent.
LegGenome crossover(const LegGenome& p1, const LegGenome& p2, Rng& rng);

struct MutationReport {
  bool thickness_redrawn = false;
  bool cp_added = false;
  bool cp_removed = false;
  bool cp_change_skipped = false;
  bool spline_added = false;
  bool spline_removed = false;
  bool spline_change_skipped = false;
};

// Gaussian perturbation of every control point coordinate (sigma = 10% of
// the coordinate's range, clamped back into bounds) followed by the three
// structural mutations. Structural changes that would leave the bounds are
// skipped. The result always satisfies all genome invariants.
LegGenome mutate(const LegGenome& genome, const GAConfig& config, Rng& rng,
                 MutationReport* report = nullptr);

// Evolution state for one repeat. Per-child RNG streams are derived from
// (master_seed, repeat, generation, child_index), so a run's history is
// identical for any evaluation concurrency.
struct GAState {
  GAConfig config;
  int repeat_index = 0;
  int generation = 0;  // completed generations
  std::uint64_t next_id = 0;
  std::uint64_t evaluations = 0;
  std::vector<Individual> population;  // sorted best-first after each phase
};

// Random initial population (generation 0), evaluated.
void init_population(GAState& state, const Evaluator& evaluate, int concurrency);

// One mu+lambda generation: children via tournament selection, crossover
// and mutation; children evaluated (possibly concurrently); combined
// population ranked by (fitness, birth generation, id) and truncated to
// pop_size. Best fitness never increases. An evaluator that throws marks
// that child rejected with the sentinel fitness and the run continues.
void run_generation(GAState& state, const Evaluator& evaluate, int concurrency);

}  // namespace legevo
