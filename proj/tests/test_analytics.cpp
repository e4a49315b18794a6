#include <doctest.h>

#include <cmath>

#include "legevo/analytics.hpp"
#include "test_helpers.hpp"

using namespace legevo;

namespace {

Individual with_fitness(double fitness, int voxels = 0) {
  Individual ind;
  ind.result.fitness = fitness;
  ind.result.occupied_count = voxels;
  return ind;
}

Individual rejected_individual() {
  Individual ind;
  ind.result.fitness = kSentinelFitness;
  ind.result.rejected = true;
  return ind;
}

}  // namespace

TEST_SUITE_BEGIN("analytics");

TEST_CASE("generation stats on a small population") {
  std::vector<Individual> pop = {with_fitness(9), with_fitness(8, 40), with_fitness(10)};
  const GenerationStats s = generation_stats(pop, 3);
  CHECK(s.generation == 3);
  CHECK(s.best == 8.0);
  CHECK(s.mean == 9.0);
  CHECK(s.worst == 10.0);
  CHECK(s.stddev == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-12));
  CHECK(s.reject_count == 0);
  CHECK(s.best_voxel_count == 40);
  CHECK_FALSE(s.all_rejected);
}

TEST_CASE("rejected individuals are excluded from the moments") {
  std::vector<Individual> pop = {with_fitness(8, 12), rejected_individual()};
  const GenerationStats s = generation_stats(pop);
  CHECK(s.best == 8.0);
  CHECK(s.mean == 8.0);
  CHECK(s.worst == 8.0);
  CHECK(s.reject_count == 1);
  CHECK_FALSE(s.all_rejected);
}

TEST_CASE("an all-rejected population is flagged") {
  std::vector<Individual> pop = {rejected_individual(), rejected_individual()};
  const GenerationStats s = generation_stats(pop);
  CHECK(s.all_rejected);
  CHECK(s.reject_count == 2);
}

TEST_CASE("stats csv has one row per generation and round-trips") {
  std::vector<GenerationStats> history;
  for (int g = 0; g <= 5; ++g) {
    GenerationStats s;
    s.generation = g;
    s.best = 10.0 - g;
    s.mean = 12.0 - g;
    s.worst = 15.0 - g;
    s.stddev = 0.5;
    s.reject_count = g % 2;
    s.best_voxel_count = 100 + g;
    history.push_back(s);
  }
  const std::string csv = stats_csv(history);
  const auto rows = std::count(csv.begin(), csv.end(), '\n');
  CHECK(rows == 6);  // header + generations 1..5

  const auto parsed = parse_stats_csv(csv);
  REQUIRE(parsed.size() == 5);
  CHECK(parsed[0].generation == 1);
  CHECK(parsed[4].generation == 5);
  CHECK(parsed[2].best == history[3].best);
  CHECK(parsed[2].best_voxel_count == history[3].best_voxel_count);
}

TEST_CASE("cross evaluation reproduces training fitness on the diagonal") {
  const LegGenome column = helpers::column_genome();
  const EvalConfig cfg;

  const EnvironmentModel soil = EnvironmentModel::soil();
  const double trained = evaluate_leg(column, soil, cfg).fitness;

  std::vector<BestLegSet> sets;
  sets.push_back({"soil", soil, {column}});
  sets.push_back({"fluid", EnvironmentModel::fluid(), {column}});
  const Matrix m = cross_evaluate(sets, cfg, 2);

  REQUIRE(m.values.size() == 2);
  REQUIRE(m.values[0].size() == 2);
  CHECK(m.values[0][0] == trained);  // exact re-evaluation
  CHECK(m.row_labels[0] == "soil");
  CHECK(m.col_labels[1] == "fluid");
  CHECK(m.values[0][1] > 0.0);
}

TEST_CASE("similarity matrix is symmetric with a diagonal of 100") {
  Rng rng(17);
  std::vector<LabeledGrid> grids;
  for (int i = 0; i < 4; ++i) {
    grids.push_back({"g" + std::to_string(i),
                     rasterize(rescale_to_full_length(random_genome(rng)))});
  }
  const Matrix m = similarity_matrix(grids);
  for (size_t i = 0; i < grids.size(); ++i) {
    CHECK(m.values[i][i] == 100.0);
    for (size_t j = 0; j < grids.size(); ++j) {
      CHECK(m.values[i][j] == m.values[j][i]);
    }
  }

  const Matrix jm = jaccard_matrix(grids);
  for (size_t i = 0; i < grids.size(); ++i) {
    CHECK(jm.values[i][i] == 100.0);
    for (size_t j = 0; j < grids.size(); ++j) {
      CHECK(jm.values[i][j] <= m.values[i][j] + 1e-9);  // jaccard is the stricter overlap
    }
  }
}

TEST_CASE("matrix csv layout") {
  Matrix m;
  m.row_labels = {"a", "b"};
  m.col_labels = {"a", "b"};
  m.values = {{1.0, 2.5}, {3.0, 4.0}};
  CHECK(matrix_csv(m) == ",a,b\na,1,2.5\nb,3,4\n");
}

TEST_SUITE_END();
