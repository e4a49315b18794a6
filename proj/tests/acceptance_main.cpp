// Acceptance suite: one pass/fail line per criterion, nonzero exit when
// anything fails. Criteria 5-8 share one 30-run campaign (3 environments
// x 10 seeded repeats, population 20, 100 generations), so this binary
// takes a while; everything is deterministic.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

#include "legevo/analytics.hpp"
#include "legevo/experiment.hpp"
#include "legevo/mesh.hpp"
#include "legevo/util.hpp"
#include "test_oracles.hpp"

using namespace legevo;

namespace {

int g_failures = 0;

struct Criterion {
  const char* name;
  bool passed = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      passed = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

void report(const Criterion& c, double seconds) {
  std::printf("[%s] %s (%.1f s)%s%s\n", c.passed ? "PASS" : "FAIL", c.name, seconds,
              c.detail.empty() ? "" : " -- ", c.detail.c_str());
  std::fflush(stdout);
  if (!c.passed) ++g_failures;
}

template <class Fn>
void run_criterion(const char* name, Fn fn) {
  Criterion c{name, true, {}};
  const auto start = std::chrono::steady_clock::now();
  fn(c);
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(c, seconds);
}

int hardware_threads() {
  ExperimentConfig cfg;
  return cfg.effective_concurrency();
}

// ---- criterion 1 -----------------------------------------------------

void criterion_fitness_formula(Criterion& c) {
  c.require(fitness_from(24000.0, 3000, 5.0) == 16.0, "tau=24000,n=3000,delta=5 must equal 16");
  c.require(fitness_from(24000.0, 3000, 0.0) == 24000.0 / 3000.0, "delta=0 must equal tau/n");

  Rng rng(1001);
  std::uniform_real_distribution<double> utau(0.0, 1e7);
  std::uniform_real_distribution<double> udelta(0.0, 100.0);
  std::uniform_int_distribution<int> un(1, 1000000);
  for (int i = 0; i < 1000; ++i) {
    const double tau = utau(rng);
    const int n = un(rng);
    const double delta = udelta(rng);
    const double got = fitness_from(tau, n, delta);
    const double expected = (tau / n) * (1.0 + delta / 5.0);
    const double err = std::abs(got - expected);
    if (err > 4.0 * std::abs(expected) * std::numeric_limits<double>::epsilon()) {
      c.require(false, "formula mismatch at tau=" + format_double(tau) + " n=" +
                           std::to_string(n) + " delta=" + format_double(delta));
      return;
    }
  }
}

// ---- criterion 2 -----------------------------------------------------

void criterion_raster_oracle(Criterion& c) {
  const int n_samples = RasterConfig{}.samples_per_spline;
  const int kGenomes = 200;
  std::vector<LegGenome> genomes;
  Rng rng(2002);
  for (int i = 0; i < kGenomes; ++i) {
    genomes.push_back(rescale_to_full_length(random_genome(rng)));
  }
  std::vector<char> ok(kGenomes, 0);
  parallel_for(kGenomes, hardware_threads(), [&](int i) {
    ok[i] = rasterize(genomes[i]) == oracles::brute_force_rasterize(genomes[i], n_samples);
  });
  for (int i = 0; i < kGenomes; ++i) {
    c.require(ok[i] != 0, "grid mismatch on genome " + std::to_string(i));
    if (!ok[i]) return;
  }
}

// ---- criterion 3 -----------------------------------------------------

void criterion_connectivity_oracle(Criterion& c) {
  Rng rng(3003);
  std::uniform_real_distribution<double> density(0.05, 0.5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    VoxelGrid grid;
    const double d = density(rng);
    for (int cell = 0; cell < VoxelGrid::kCells; ++cell) grid.cells[cell] = u(rng) < d;
    if (connectivity_gate(grid) != oracles::label_propagation_connected(grid)) {
      c.require(false, "disagreement on random grid " + std::to_string(i));
      return;
    }
  }

  VoxelGrid column;
  for (int iy = 0; iy < VoxelGrid::kNy; ++iy) column.set(8, iy, 8);
  c.require(connectivity_gate(column), "full column must pass");
  c.require(oracles::label_propagation_connected(column), "oracle must pass the column");

  VoxelGrid severed = column;
  severed.set(8, 10, 8, false);
  c.require(!connectivity_gate(severed), "severed column must be rejected");
  c.require(!oracles::label_propagation_connected(severed), "oracle must reject the severed column");
}

// ---- criterion 4 -----------------------------------------------------

void criterion_ga_invariants(Criterion& c) {
  ExperimentConfig cfg;
  cfg.env = EnvironmentModel::soil();
  cfg.ga.master_seed = 777;
  cfg.repeats = 1;

  auto run_watched = [&](int concurrency, std::string* history_out) {
    cfg.concurrency = concurrency;
    const EvalConfig eval_cfg = cfg.eval_config();
    const Evaluator evaluate = [&cfg, eval_cfg](const LegGenome& g) {
      return evaluate_leg(g, cfg.env, eval_cfg);
    };
    GAState state;
    state.config = cfg.ga;
    std::vector<GenerationStats> history;
    init_population(state, evaluate, concurrency);
    history.push_back(generation_stats(state.population, 0));

    double best = kSentinelFitness;
    if (!history[0].all_rejected) best = history[0].best;
    for (int g = 1; g <= cfg.ga.generations; ++g) {
      run_generation(state, evaluate, concurrency);
      history.push_back(generation_stats(state.population, g));

      c.require(static_cast<int>(state.population.size()) == cfg.ga.pop_size,
                "population size drifted at generation " + std::to_string(g));
      for (const Individual& ind : state.population) {
        if (auto violation = invariant_violation(ind.genome)) {
          c.require(false, "genome bound violation at generation " + std::to_string(g) + ": " +
                               *violation);
        }
      }
      const double gen_best = history.back().all_rejected ? kSentinelFitness : history.back().best;
      c.require(gen_best <= best, "best fitness increased at generation " + std::to_string(g));
      best = std::min(best, gen_best);
    }
    *history_out = stats_csv(history);
  };

  std::string serial_history;
  std::string parallel_history;
  run_watched(1, &serial_history);
  run_watched(8, &parallel_history);
  c.require(serial_history == parallel_history,
            "run history differs between concurrency 1 and 8");
}

// ---- criteria 5-8 (shared campaign) ----------------------------------

struct CampaignRun {
  double initial_best = kSentinelFitness;
  double final_best = kSentinelFitness;
  LegGenome best_genome;
  bool has_best = false;
};

struct Campaign {
  std::map<EnvironmentKind, std::vector<CampaignRun>> runs;
  ExperimentConfig base;
};

Campaign run_campaign() {
  Campaign campaign;
  const EnvironmentKind kinds[] = {EnvironmentKind::kSoil, EnvironmentKind::kGravel,
                                   EnvironmentKind::kFluid};
  const std::uint64_t seeds[] = {9101, 9102, 9103};

  for (int e = 0; e < 3; ++e) {
    ExperimentConfig cfg;
    cfg.env = EnvironmentModel::make(kinds[e]);
    cfg.ga.master_seed = seeds[e];
    cfg.repeats = 10;
    campaign.base = cfg;

    for (int repeat = 0; repeat < cfg.repeats; ++repeat) {
      const RunResult result = run_single_repeat(cfg, repeat);
      CampaignRun run;
      run.initial_best =
          result.history.front().all_rejected ? kSentinelFitness : result.history.front().best;
      run.final_best =
          result.history.back().all_rejected ? kSentinelFitness : result.history.back().best;
      if (const Individual* best = result.best()) {
        run.best_genome = best->genome;
        run.has_best = true;
      }
      campaign.runs[kinds[e]].push_back(std::move(run));
      std::printf("  campaign: %s repeat %d best %.6g (initial %.6g)\n", to_string(kinds[e]),
                  repeat, run.final_best, run.initial_best);
      std::fflush(stdout);
    }
  }
  return campaign;
}

void criterion_optimization_efficacy(Criterion& c, const Campaign& campaign) {
  for (const auto& [kind, runs] : campaign.runs) {
    int improved = 0;
    for (const CampaignRun& run : runs) {
      improved += run.final_best < run.initial_best;
    }
    c.require(improved >= 8, std::string(to_string(kind)) + ": only " + std::to_string(improved) +
                                 "/10 runs improved strictly");
  }
}

void criterion_specialization(Criterion& c, const Campaign& campaign) {
  std::vector<BestLegSet> sets;
  for (const auto& [kind, runs] : campaign.runs) {
    BestLegSet set;
    set.label = to_string(kind);
    set.env = EnvironmentModel::make(kind);
    for (const CampaignRun& run : runs) {
      if (run.has_best) set.legs.push_back(run.best_genome);
    }
    c.require(!set.legs.empty(), set.label + ": no best legs to cross-evaluate");
    sets.push_back(std::move(set));
  }

  const Matrix m = cross_evaluate(sets, campaign.base.eval_config(), hardware_threads());
  std::printf("  cross-eval matrix:\n%s", matrix_csv(m).c_str());
  std::fflush(stdout);
  for (size_t col = 0; col < m.values.size(); ++col) {
    for (size_t row = 0; row < m.values.size(); ++row) {
      if (row == col) continue;
      c.require(m.values[col][col] < m.values[row][col],
                m.col_labels[col] + " column: native mean " + format_double(m.values[col][col]) +
                    " not below " + m.row_labels[row] + " mean " +
                    format_double(m.values[row][col]));
    }
  }
}

VoxelGrid campaign_phenotype(const Campaign& campaign, const LegGenome& genome) {
  return phenotype(genome, campaign.base.eval_config());
}

void criterion_morphology(Criterion& c, const Campaign& campaign) {
  auto mean_voxels = [&](EnvironmentKind kind) {
    double sum = 0.0;
    int n = 0;
    for (const CampaignRun& run : campaign.runs.at(kind)) {
      if (!run.has_best) continue;
      sum += campaign_phenotype(campaign, run.best_genome).occupied_count();
      ++n;
    }
    return n > 0 ? sum / n : 0.0;
  };
  const double soil = mean_voxels(EnvironmentKind::kSoil);
  const double gravel = mean_voxels(EnvironmentKind::kGravel);
  std::printf("  mean voxels: soil %.1f, gravel %.1f\n", soil, gravel);
  std::fflush(stdout);
  c.require(soil < gravel, "mean soil voxels " + format_double(soil) +
                               " not below mean gravel voxels " + format_double(gravel));
}

void criterion_similarity_pattern(Criterion& c, const Campaign& campaign) {
  std::vector<LabeledGrid> grids;
  std::vector<EnvironmentKind> kinds;
  for (const auto& [kind, runs] : campaign.runs) {
    for (size_t r = 0; r < runs.size(); ++r) {
      if (!runs[r].has_best) continue;
      grids.push_back({std::string(to_string(kind)) + "_r" + std::to_string(r),
                       campaign_phenotype(campaign, runs[r].best_genome)});
      kinds.push_back(kind);
    }
  }
  const Matrix m = similarity_matrix(grids);

  double within_sum = 0.0;
  int within_n = 0;
  double cross_sum = 0.0;
  int cross_n = 0;
  for (size_t i = 0; i < grids.size(); ++i) {
    for (size_t j = i + 1; j < grids.size(); ++j) {
      if (kinds[i] == kinds[j]) {
        within_sum += m.values[i][j];
        ++within_n;
      } else {
        cross_sum += m.values[i][j];
        ++cross_n;
      }
    }
  }
  const double within = within_sum / within_n;
  const double cross = cross_sum / cross_n;
  std::printf("  similarity: within %.3f%%, cross %.3f%%\n", within, cross);
  std::fflush(stdout);
  c.require(within >= cross, "within-environment similarity " + format_double(within) +
                                 " below cross-environment " + format_double(cross));
}

// ---- criterion 9 -----------------------------------------------------

void criterion_mesh_integrity(Criterion& c) {
  Rng rng(909);
  int checked = 0;
  while (checked < 50) {
    LegGenome genome = random_genome(rng);
    VoxelGrid grid;
    try {
      grid = rasterize(rescale_to_full_length(genome));
    } catch (const DegenerateGenome&) {
      continue;
    }
    if (!connectivity_gate(grid)) continue;
    ++checked;

    const TriangleMesh mesh = extract_surface(grid);
    if (!oracles::every_edge_shared_by_two(mesh)) {
      c.require(false, "open edge on phenotype " + std::to_string(checked));
      return;
    }
    const double expected = grid.occupied_count() * 125.0;
    if (std::abs(signed_volume(mesh) - expected) > 1e-6 * expected) {
      c.require(false, "volume mismatch on phenotype " + std::to_string(checked));
      return;
    }
  }

  // Single cube OBJ record counts.
  VoxelGrid cube_grid;
  cube_grid.set(0, 0, 0);
  const TriangleMesh cube = extract_surface(cube_grid);
  const auto tmp = std::filesystem::temp_directory_path();
  const auto obj_path = tmp / "legevo_acceptance_cube.obj";
  write_obj(cube, obj_path);
  std::ifstream in(obj_path);
  std::string line;
  int v_lines = 0;
  int f_lines = 0;
  while (std::getline(in, line)) {
    v_lines += line.rfind("v ", 0) == 0;
    f_lines += line.rfind("f ", 0) == 0;
  }
  in.close();
  std::filesystem::remove(obj_path);
  c.require(v_lines == 8, "cube OBJ has " + std::to_string(v_lines) + " vertices, expected 8");
  c.require(f_lines == 12, "cube OBJ has " + std::to_string(f_lines) + " faces, expected 12");

  // Binary STL size arithmetic.
  const auto stl_path = tmp / "legevo_acceptance_cube.stl";
  write_stl(cube, stl_path);
  const auto size = std::filesystem::file_size(stl_path);
  std::filesystem::remove(stl_path);
  c.require(size == 84 + 50 * cube.triangles.size(),
            "cube STL size " + std::to_string(size) + " bytes, expected 684");

  Rng rng2(9090);
  const VoxelGrid leg = rasterize(rescale_to_full_length(random_genome(rng2)));
  const TriangleMesh leg_mesh = extract_surface(leg);
  const auto leg_stl = tmp / "legevo_acceptance_leg.stl";
  write_stl(leg_mesh, leg_stl);
  const auto leg_size = std::filesystem::file_size(leg_stl);
  std::filesystem::remove(leg_stl);
  c.require(leg_size == 84 + 50 * leg_mesh.triangles.size(), "random-leg STL size mismatch");
}

}  // namespace

int main(int argc, char** argv) {
  const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;

  run_criterion("criterion 1: fitness formula exactness", criterion_fitness_formula);
  run_criterion("criterion 2: rasterization matches the exhaustive oracle",
                criterion_raster_oracle);
  run_criterion("criterion 3: connectivity gate matches the flood-fill oracle",
                criterion_connectivity_oracle);
  run_criterion("criterion 9: mesh integrity", criterion_mesh_integrity);
  run_criterion("criterion 4: 100-generation GA invariants and determinism",
                criterion_ga_invariants);

  if (quick) {
    std::printf("(--quick: skipping the 30-run campaign for criteria 5-8)\n");
    return g_failures == 0 ? 0 : 1;
  }

  std::printf("running the 30-run campaign for criteria 5-8...\n");
  std::fflush(stdout);
  const auto start = std::chrono::steady_clock::now();
  const Campaign campaign = run_campaign();
  std::printf("campaign finished in %.0f s\n",
              std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());

  run_criterion("criterion 5: fitness improves in >=8/10 runs per environment",
                [&](Criterion& c) { criterion_optimization_efficacy(c, campaign); });
  run_criterion("criterion 6: native legs win their own environment (diagonal dominance)",
                [&](Criterion& c) { criterion_specialization(c, campaign); });
  run_criterion("criterion 7: soil legs use fewer voxels than gravel legs",
                [&](Criterion& c) { criterion_morphology(c, campaign); });
  run_criterion("criterion 8: within-environment similarity >= cross-environment",
                [&](Criterion& c) { criterion_similarity_pattern(c, campaign); });

  if (g_failures > 0) {
    std::printf("%d criterion(s) FAILED\n", g_failures);
    return 1;
  }
  std::printf("all acceptance criteria passed\n");
  return 0;
}
