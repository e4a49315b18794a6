#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "legevo/analytics.hpp"
#include "legevo/experiment.hpp"
#include "legevo/mesh.hpp"
#include "legevo/util.hpp"

namespace {

using namespace legevo;

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

ExperimentConfig config_or_default(const std::string& config_path) {
  if (config_path.empty()) return ExperimentConfig{};
  return load_config_file(config_path);
}

int cmd_evolve(const std::string& config_path) {
  const ExperimentConfig config = load_config_file(config_path);
  const auto results = run_experiment(config);
  std::cout << "environment " << to_string(config.env.kind) << ", " << results.size()
            << " repeat(s) -> " << config.resolved_output_dir().string() << '\n';
  for (const RunResult& r : results) {
    std::cout << "repeat " << r.repeat;
    if (const Individual* best = r.best()) {
      std::cout << " best_fitness " << format_double(best->fitness()) << " voxels "
                << best->result.occupied_count;
    } else {
      std::cout << " all_rejected";
    }
    std::cout << '\n';
  }
  return 0;
}

int cmd_eval(const std::string& genome_path, const std::string& env_name,
             const std::string& config_path, const std::string& trace_path) {
  const ExperimentConfig base = config_or_default(config_path);
  EnvironmentModel env = base.env;
  if (auto kind = parse_environment_kind(env_name)) {
    env.kind = *kind;
  } else {
    std::cerr << "unknown environment '" << env_name << "' (expected soil|gravel|fluid)\n";
    return 1;
  }

  const LegGenome genome = read_genome_file(genome_path);
  EvalConfig eval_cfg = base.eval_config();
  eval_cfg.record_traces = !trace_path.empty();
  const EvaluationResult result = evaluate_leg(genome, env, eval_cfg);

  std::cout << "fitness " << format_double(result.fitness) << '\n';
  std::cout << "tau_per_step " << format_double(result.tau / result.n_steps) << '\n';
  std::cout << "delta " << format_double(result.delta) << '\n';
  std::cout << "rejected " << (result.rejected ? "true" : "false") << '\n';
  if (result.rejected) std::cout << "reason " << result.reject_reason << '\n';

  if (!trace_path.empty() && !result.rejected) {
    std::string csv = "step,coxa,femur,tibia\n";
    for (int s = 0; s < result.n_steps; ++s) {
      csv += std::to_string(s) + ',' + format_double(result.joint_traces[0][s]) + ',' +
             format_double(result.joint_traces[1][s]) + ',' +
             format_double(result.joint_traces[2][s]) + '\n';
    }
    write_text(trace_path, csv);
  }
  return 0;
}

int cmd_export(const std::string& genome_path, const std::string& obj_path,
               const std::string& stl_path, int smooth_iters, double lambda,
               const std::string& config_path) {
  const ExperimentConfig base = config_or_default(config_path);
  const LegGenome genome = read_genome_file(genome_path);
  const VoxelGrid grid = phenotype(genome, base.eval_config());
  TriangleMesh mesh = extract_surface(grid);
  if (smooth_iters > 0) mesh = smooth(mesh, smooth_iters, lambda);
  write_obj(mesh, obj_path);
  if (!stl_path.empty()) write_stl(mesh, stl_path);
  std::cout << "vertices " << mesh.vertices.size() << " triangles " << mesh.triangles.size()
            << " voxels " << grid.occupied_count() << '\n';
  return 0;
}

std::vector<BestLegSet> grouped_best_legs(const std::string& runs_dir,
                                          const ExperimentConfig& base) {
  std::vector<DiscoveredRun> runs = discover_best_legs(runs_dir);
  if (runs.empty()) throw std::runtime_error("no completed runs found under " + runs_dir);
  std::vector<BestLegSet> sets;
  for (const DiscoveredRun& run : runs) {
    if (sets.empty() || sets.back().env.kind != run.kind) {
      BestLegSet set;
      set.label = to_string(run.kind);
      set.env = base.env;
      set.env.kind = run.kind;
      sets.push_back(std::move(set));
    }
    sets.back().legs.push_back(run.best);
  }
  return sets;
}

int cmd_cross_eval(const std::string& runs_dir, const std::string& out_path,
                   const std::string& config_path) {
  const ExperimentConfig base = config_or_default(config_path);
  const auto sets = grouped_best_legs(runs_dir, base);
  const Matrix matrix = cross_evaluate(sets, base.eval_config(), base.effective_concurrency());
  const std::string csv = matrix_csv(matrix);
  write_text(out_path, csv);
  std::cout << csv;
  return 0;
}

int cmd_similarity(const std::string& runs_dir, const std::string& out_path,
                   const std::string& config_path) {
  const ExperimentConfig base = config_or_default(config_path);
  std::vector<DiscoveredRun> runs = discover_best_legs(runs_dir);
  if (runs.size() < 2) throw std::runtime_error("need at least two runs for a similarity matrix");

  std::vector<LabeledGrid> grids;
  for (const DiscoveredRun& run : runs) {
    LabeledGrid entry;
    entry.label = std::string(to_string(run.kind)) + "_r" + std::to_string(run.repeat);
    entry.grid = phenotype(run.best, base.eval_config());
    grids.push_back(std::move(entry));
  }
  write_text(out_path, matrix_csv(similarity_matrix(grids)));

  std::filesystem::path jaccard_path(out_path);
  jaccard_path.replace_extension("");
  jaccard_path += "_jaccard.csv";
  write_text(jaccard_path, matrix_csv(jaccard_matrix(grids)));
  std::cout << "similarity matrix over " << grids.size() << " legs -> " << out_path << '\n';
  return 0;
}

std::string render_ascii_chart(const std::vector<GenerationStats>& history) {
  constexpr int kRows = 20;
  constexpr int kCols = 70;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const GenerationStats& s : history) {
    if (s.all_rejected) continue;
    lo = std::min(lo, s.best);
    hi = std::max(hi, s.worst);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) return "(no non-rejected data)\n";
  if (hi <= lo) hi = lo + 1.0;

  std::vector<std::string> canvas(kRows, std::string(kCols, ' '));
  auto plot = [&](int gen_index, double value, char mark) {
    const int col = history.size() <= 1
                        ? 0
                        : static_cast<int>(std::round(static_cast<double>(gen_index) *
                                                      (kCols - 1) / (history.size() - 1)));
    int row = static_cast<int>(std::round((value - lo) / (hi - lo) * (kRows - 1)));
    row = std::clamp(row, 0, kRows - 1);
    canvas[kRows - 1 - row][col] = mark;
  };
  for (size_t i = 0; i < history.size(); ++i) {
    if (history[i].all_rejected) continue;
    plot(static_cast<int>(i), history[i].worst, 'w');
    plot(static_cast<int>(i), history[i].mean, 'm');
    plot(static_cast<int>(i), history[i].best, 'b');
  }

  std::string out = "fitness  max " + format_double(hi) + '\n';
  for (const std::string& row : canvas) out += "  |" + row + '\n';
  out += "  +" + std::string(kCols, '-') + '\n';
  out += "fitness  min " + format_double(lo) + "   (b=best m=mean w=worst, " +
         std::to_string(history.size()) + " generations)\n";
  return out;
}

std::string render_svg_chart(const std::vector<GenerationStats>& history) {
  constexpr double kW = 640.0;
  constexpr double kH = 360.0;
  constexpr double kPad = 40.0;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (const GenerationStats& s : history) {
    if (s.all_rejected) continue;
    lo = std::min(lo, s.best);
    hi = std::max(hi, s.worst);
  }
  if (!std::isfinite(lo) || !std::isfinite(hi)) return "<svg/>";
  if (hi <= lo) hi = lo + 1.0;

  auto polyline = [&](auto value_of, const char* color) {
    std::string pts;
    for (size_t i = 0; i < history.size(); ++i) {
      if (history[i].all_rejected) continue;
      const double x =
          kPad + (history.size() <= 1 ? 0.0 : i * (kW - 2 * kPad) / (history.size() - 1));
      const double y = kH - kPad - (value_of(history[i]) - lo) / (hi - lo) * (kH - 2 * kPad);
      pts += format_double(x) + ',' + format_double(y) + ' ';
    }
    return "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" points=\"" + pts +
           "\"/>\n";
  };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"360\">\n";
  svg += "<rect width=\"640\" height=\"360\" fill=\"white\"/>\n";
  svg += polyline([](const GenerationStats& s) { return s.worst; }, "red");
  svg += polyline([](const GenerationStats& s) { return s.mean; }, "blue");
  svg += polyline([](const GenerationStats& s) { return s.best; }, "green");
  svg += "<text x=\"40\" y=\"20\">fitness per generation (green=best blue=mean red=worst)</text>\n";
  svg += "</svg>\n";
  return svg;
}

int cmd_plot(const std::string& stats_path, const std::string& out_path) {
  std::ifstream in(stats_path);
  if (!in) throw std::runtime_error("cannot open stats CSV: " + stats_path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::vector<GenerationStats> history = parse_stats_csv(ss.str());
  if (history.empty()) throw std::runtime_error("stats CSV has no data rows");

  if (out_path == "ascii" || out_path == "-") {
    std::cout << render_ascii_chart(history);
    return 0;
  }
  const std::filesystem::path path(out_path);
  if (path.extension() == ".svg") {
    write_text(path, render_svg_chart(history));
  } else {
    write_text(path, render_ascii_chart(history));
  }
  std::cout << "wrote " << out_path << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"legevo: evolutionary shape optimization of hexapod tibia morphologies"};
  app.require_subcommand(1);

  std::string config_path;
  std::string genome_path;
  std::string env_name;
  std::string trace_path;
  std::string obj_path;
  std::string stl_path;
  std::string runs_dir;
  std::string out_path;
  std::string stats_path;
  int smooth_iters = 0;
  double smooth_lambda = 0.5;

  auto* evolve = app.add_subcommand("evolve", "run a full evolutionary experiment");
  evolve->add_option("--config", config_path, "experiment config file")->required();

  auto* eval = app.add_subcommand("eval", "evaluate one genome in one environment");
  eval->add_option("--genome", genome_path, "genome file")->required();
  eval->add_option("--env", env_name, "soil|gravel|fluid")->required();
  eval->add_option("--config", config_path, "optional config file for physics knobs");
  eval->add_option("--trace", trace_path, "write per-step joint torque CSV here");

  auto* exp = app.add_subcommand("export", "export a genome's phenotype as OBJ/STL");
  exp->add_option("--genome", genome_path, "genome file")->required();
  exp->add_option("--obj", obj_path, "output OBJ path")->required();
  exp->add_option("--stl", stl_path, "output STL path");
  exp->add_option("--smooth", smooth_iters, "Laplacian smoothing iterations");
  exp->add_option("--lambda", smooth_lambda, "smoothing step factor in (0,1)");
  exp->add_option("--config", config_path, "optional config file");

  auto* cross = app.add_subcommand("cross-eval", "best-leg cross-environment fitness matrix");
  cross->add_option("--runs", runs_dir, "directory containing completed runs")->required();
  cross->add_option("--out", out_path, "output CSV path")->required();
  cross->add_option("--config", config_path, "optional config file");

  auto* sim = app.add_subcommand("similarity", "pairwise voxel similarity of best legs");
  sim->add_option("--runs", runs_dir, "directory containing completed runs")->required();
  sim->add_option("--out", out_path, "output CSV path")->required();
  sim->add_option("--config", config_path, "optional config file");

  auto* plot = app.add_subcommand("plot", "render a fitness progression chart");
  plot->add_option("--stats", stats_path, "stats.csv from a run")->required();
  plot->add_option("--out", out_path, "output path (.svg for SVG), or 'ascii' for stdout")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (evolve->parsed()) return cmd_evolve(config_path);
    if (eval->parsed()) return cmd_eval(genome_path, env_name, config_path, trace_path);
    if (exp->parsed()) {
      return cmd_export(genome_path, obj_path, stl_path, smooth_iters, smooth_lambda, config_path);
    }
    if (cross->parsed()) return cmd_cross_eval(runs_dir, out_path, config_path);
    if (sim->parsed()) return cmd_similarity(runs_dir, out_path, config_path);
    if (plot->parsed()) return cmd_plot(stats_path, out_path);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
