#include "legevo/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <thread>

#include "legevo/mesh.hpp"
#include "legevo/util.hpp"

namespace legevo {

namespace fs = std::filesystem;

EvalConfig ExperimentConfig::eval_config() const {
  EvalConfig cfg;
  cfg.chain = chain;
  cfg.structural = structural;
  cfg.raster = raster;
  cfg.trajectory = trajectory;
  return cfg;
}

int ExperimentConfig::effective_concurrency() const {
  if (concurrency > 0) return concurrency;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

fs::path ExperimentConfig::resolved_output_dir() const {
  if (!output_dir.empty()) return output_dir;
  if (const char* env_dir = std::getenv("LEGEVO_OUTPUT_DIR")) {
    if (*env_dir) return env_dir;
  }
  return "runs";
}

namespace {

struct Knob {
  std::string section;
  std::string key;
  std::function<void(ExperimentConfig&, const std::string&)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

[[noreturn]] void bad_value(const std::string& section, const std::string& key,
                            const std::string& value) {
  throw ConfigError("invalid value '" + value + "' for " + section + "." + key);
}

template <class Ref>
Knob int_knob(const char* section, const char* key, Ref ref) {
  return {section, key,
          [=](ExperimentConfig& c, const std::string& v) {
            int value = 0;
            auto res = std::from_chars(v.data(), v.data() + v.size(), value);
            if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad_value(section, key, v);
            ref(c) = value;
          },
          [=](const ExperimentConfig& c) { return std::to_string(ref(const_cast<ExperimentConfig&>(c))); }};
}

template <class Ref>
Knob u64_knob(const char* section, const char* key, Ref ref) {
  return {section, key,
          [=](ExperimentConfig& c, const std::string& v) {
            std::uint64_t value = 0;
            auto res = std::from_chars(v.data(), v.data() + v.size(), value);
            if (res.ec != std::errc{} || res.ptr != v.data() + v.size()) bad_value(section, key, v);
            ref(c) = value;
          },
          [=](const ExperimentConfig& c) { return std::to_string(ref(const_cast<ExperimentConfig&>(c))); }};
}

template <class Ref>
Knob double_knob(const char* section, const char* key, Ref ref) {
  return {section, key,
          [=](ExperimentConfig& c, const std::string& v) {
            try {
              size_t used = 0;
              const double value = std::stod(v, &used);
              if (used != v.size()) bad_value(section, key, v);
              ref(c) = value;
            } catch (const ConfigError&) {
              throw;
            } catch (const std::exception&) {
              bad_value(section, key, v);
            }
          },
          [=](const ExperimentConfig& c) { return format_double(ref(const_cast<ExperimentConfig&>(c))); }};
}

template <class Ref>
Knob bool_knob(const char* section, const char* key, Ref ref) {
  return {section, key,
          [=](ExperimentConfig& c, const std::string& v) {
            if (v == "true") {
              ref(c) = true;
            } else if (v == "false") {
              ref(c) = false;
            } else {
              bad_value(section, key, v);
            }
          },
          [=](const ExperimentConfig& c) {
            return ref(const_cast<ExperimentConfig&>(c)) ? "true" : "false";
          }};
}

std::vector<Knob> knob_table() {
  std::vector<Knob> knobs;

  knobs.push_back({"experiment", "output_dir",
                   [](ExperimentConfig& c, const std::string& v) { c.output_dir = v; },
                   [](const ExperimentConfig& c) { return c.output_dir; }});
  knobs.push_back(int_knob("experiment", "repeats", [](ExperimentConfig& c) -> int& { return c.repeats; }));
  knobs.push_back(int_knob("experiment", "concurrency",
                           [](ExperimentConfig& c) -> int& { return c.concurrency; }));
  knobs.push_back(u64_knob("experiment", "master_seed",
                           [](ExperimentConfig& c) -> std::uint64_t& { return c.ga.master_seed; }));
  knobs.push_back(bool_knob("experiment", "save_meshes",
                            [](ExperimentConfig& c) -> bool& { return c.save_meshes; }));
  knobs.push_back(int_knob("experiment", "smooth_iterations",
                           [](ExperimentConfig& c) -> int& { return c.smooth_iterations; }));
  knobs.push_back(double_knob("experiment", "smooth_lambda",
                              [](ExperimentConfig& c) -> double& { return c.smooth_lambda; }));

  knobs.push_back(int_knob("ga", "pop_size", [](ExperimentConfig& c) -> int& { return c.ga.pop_size; }));
  knobs.push_back(int_knob("ga", "children_per_gen",
                           [](ExperimentConfig& c) -> int& { return c.ga.children_per_gen; }));
  knobs.push_back(
      int_knob("ga", "generations", [](ExperimentConfig& c) -> int& { return c.ga.generations; }));
  knobs.push_back(int_knob("ga", "tournament_size",
                           [](ExperimentConfig& c) -> int& { return c.ga.tournament_size; }));
  knobs.push_back(double_knob("ga", "sigma_fraction",
                              [](ExperimentConfig& c) -> double& { return c.ga.sigma_fraction; }));
  knobs.push_back(double_knob("ga", "p_thickness",
                              [](ExperimentConfig& c) -> double& { return c.ga.p_thickness; }));
  knobs.push_back(double_knob("ga", "p_cp_structural",
                              [](ExperimentConfig& c) -> double& { return c.ga.p_cp_structural; }));
  knobs.push_back(double_knob("ga", "p_spline_structural", [](ExperimentConfig& c) -> double& {
    return c.ga.p_spline_structural;
  }));
  knobs.push_back(double_knob("ga", "p_add_given_structural", [](ExperimentConfig& c) -> double& {
    return c.ga.p_add_given_structural;
  }));

  knobs.push_back({"environment", "kind",
                   [](ExperimentConfig& c, const std::string& v) {
                     auto kind = parse_environment_kind(v);
                     if (!kind) bad_value("environment", "kind", v);
                     c.env.kind = *kind;
                   },
                   [](const ExperimentConfig& c) { return to_string(c.env.kind); }});
  knobs.push_back(double_knob("environment", "k_soil",
                              [](ExperimentConfig& c) -> double& { return c.env.k_soil; }));
  knobs.push_back(double_knob("environment", "c_soil",
                              [](ExperimentConfig& c) -> double& { return c.env.c_soil; }));
  knobs.push_back(double_knob("environment", "k_gravel",
                              [](ExperimentConfig& c) -> double& { return c.env.k_gravel; }));
  knobs.push_back(double_knob("environment", "deficit_gain",
                              [](ExperimentConfig& c) -> double& { return c.env.deficit_gain; }));
  knobs.push_back(double_knob("environment", "drag_cd",
                              [](ExperimentConfig& c) -> double& { return c.env.drag_cd; }));
  knobs.push_back(double_knob("environment", "rho_fluid",
                              [](ExperimentConfig& c) -> double& { return c.env.rho_fluid; }));
  knobs.push_back(double_knob("environment", "support_bearing_k", [](ExperimentConfig& c) -> double& {
    return c.env.support_bearing_k;
  }));
  knobs.push_back(double_knob("environment", "nominal_load",
                              [](ExperimentConfig& c) -> double& { return c.env.nominal_load; }));
  knobs.push_back(double_knob("environment", "medium_depth",
                              [](ExperimentConfig& c) -> double& { return c.env.medium_depth; }));
  knobs.push_back(double_knob("environment", "v_eps",
                              [](ExperimentConfig& c) -> double& { return c.env.v_eps; }));

  knobs.push_back(double_knob("chain", "coxa_link",
                              [](ExperimentConfig& c) -> double& { return c.chain.coxa_link; }));
  knobs.push_back(double_knob("chain", "femur_link",
                              [](ExperimentConfig& c) -> double& { return c.chain.femur_link; }));
  knobs.push_back(double_knob("chain", "hip_height",
                              [](ExperimentConfig& c) -> double& { return c.chain.hip_height; }));

  knobs.push_back(int_knob("simulation", "n_steps",
                           [](ExperimentConfig& c) -> int& { return c.trajectory.n_steps; }));
  knobs.push_back(double_knob("simulation", "dt",
                              [](ExperimentConfig& c) -> double& { return c.trajectory.dt; }));

  knobs.push_back(double_knob("structcheck", "load_newtons", [](ExperimentConfig& c) -> double& {
    return c.structural.load_newtons;
  }));
  knobs.push_back(double_knob("structcheck", "sigma_max",
                              [](ExperimentConfig& c) -> double& { return c.structural.sigma_max; }));

  knobs.push_back(int_knob("voxelizer", "samples_per_spline", [](ExperimentConfig& c) -> int& {
    return c.raster.samples_per_spline;
  }));

  return knobs;
}

void validate(const ExperimentConfig& c) {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw ConfigError(std::string("config validation failed: ") + what);
  };
  require(c.repeats > 0, "repeats must be positive");
  require(c.ga.pop_size > 0, "pop_size must be positive");
  require(c.ga.children_per_gen > 0, "children_per_gen must be positive");
  require(c.ga.generations >= 0, "generations must be non-negative");
  require(c.ga.tournament_size > 0, "tournament_size must be positive");
  require(c.ga.tournament_size <= c.ga.pop_size, "tournament_size must not exceed pop_size");
  for (double p : {c.ga.p_thickness, c.ga.p_cp_structural, c.ga.p_spline_structural,
                   c.ga.p_add_given_structural}) {
    require(p >= 0.0 && p <= 1.0, "probabilities must be in [0,1]");
  }
  require(c.ga.sigma_fraction >= 0.0, "sigma_fraction must be non-negative");
  require(c.env.medium_depth > 0.0, "medium_depth must be positive");
  for (double k : {c.env.k_soil, c.env.c_soil, c.env.k_gravel, c.env.drag_cd, c.env.deficit_gain,
                   c.env.rho_fluid, c.env.support_bearing_k, c.env.nominal_load}) {
    require(k >= 0.0, "environment coefficients must be non-negative");
  }
  require(c.chain.coxa_link > 0.0 && c.chain.femur_link > 0.0, "link lengths must be positive");
  require(c.trajectory.n_steps > 0, "n_steps must be positive");
  require(c.trajectory.dt > 0.0, "dt must be positive");
  require(c.raster.samples_per_spline >= 2, "samples_per_spline must be at least 2");
  require(c.smooth_iterations >= 0, "smooth_iterations must be non-negative");
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& text) {
  ExperimentConfig config;
  const std::vector<Knob> knobs = knob_table();

  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') {
        throw ConfigError("line " + std::to_string(line_no) + ": malformed section header");
      }
      section = trim(line.substr(1, line.size() - 2));
      const bool known = std::any_of(knobs.begin(), knobs.end(),
                                     [&](const Knob& k) { return k.section == section; });
      if (!known) {
        throw ConfigError("line " + std::to_string(line_no) + ": unknown section [" + section + "]");
      }
      continue;
    }

    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) {
      throw ConfigError("line " + std::to_string(line_no) + ": key outside any section");
    }

    const auto knob = std::find_if(knobs.begin(), knobs.end(), [&](const Knob& k) {
      return k.section == section && k.key == key;
    });
    if (knob == knobs.end()) {
      throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key +
                        "' in section [" + section + "]");
    }
    knob->set(config, value);
  }

  validate(config);
  return config;
}

ExperimentConfig load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str());
}

std::string config_to_text(const ExperimentConfig& config) {
  std::string out;
  std::string section;
  for (const Knob& knob : knob_table()) {
    if (knob.section != section) {
      if (!section.empty()) out += '\n';
      section = knob.section;
      out += '[' + section + "]\n";
    }
    out += knob.key + " = " + knob.get(config) + '\n';
  }
  return out;
}

const Individual* RunResult::best() const {
  for (const Individual& ind : final_population) {
    if (!ind.result.rejected) return &ind;
  }
  return nullptr;
}

RunResult run_single_repeat(const ExperimentConfig& config, int repeat) {
  const EvalConfig eval_cfg = config.eval_config();
  const Evaluator evaluate = [&config, eval_cfg](const LegGenome& genome) {
    return evaluate_leg(genome, config.env, eval_cfg);
  };
  const int concurrency = config.effective_concurrency();

  GAState state;
  state.config = config.ga;
  state.repeat_index = repeat;

  RunResult result;
  result.repeat = repeat;
  result.derived_seed = derive_seed(config.ga.master_seed, repeat);

  init_population(state, evaluate, concurrency);
  result.history.push_back(generation_stats(state.population, 0));
  for (int g = 1; g <= config.ga.generations; ++g) {
    run_generation(state, evaluate, concurrency);
    result.history.push_back(generation_stats(state.population, g));
  }
  result.final_population = std::move(state.population);
  result.evaluations = state.evaluations;
  return result;
}

std::vector<RunResult> run_repeats(const ExperimentConfig& config) {
  std::vector<RunResult> results;
  results.reserve(config.repeats);
  for (int r = 0; r < config.repeats; ++r) {
    results.push_back(run_single_repeat(config, r));
  }
  return results;
}

namespace {

void write_text_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open for write: " + path.string());
  out << text;
  if (!out.flush()) throw std::runtime_error("write failed: " + path.string());
}

std::string zero_pad(int value, int width) {
  std::string s = std::to_string(value);
  while (static_cast<int>(s.size()) < width) s.insert(s.begin(), '0');
  return s;
}

void write_repeat_artifacts(const ExperimentConfig& config, const RunResult& result,
                            const fs::path& repeat_dir) {
  fs::create_directories(repeat_dir);
  write_text_file(repeat_dir / "stats.csv", stats_csv(result.history));

  const fs::path pop_dir = repeat_dir / "final_population";
  fs::create_directories(pop_dir);
  const fs::path mesh_dir = repeat_dir / "meshes";
  if (config.save_meshes) fs::create_directories(mesh_dir);

  for (size_t rank = 0; rank < result.final_population.size(); ++rank) {
    const Individual& ind = result.final_population[rank];
    const std::string stem = "leg_" + zero_pad(static_cast<int>(rank), 2);
    write_genome_file(ind.genome, pop_dir / (stem + ".leg"));
    if (!config.save_meshes || ind.result.rejected) continue;
    try {
      VoxelGrid grid = phenotype(ind.genome, config.eval_config());
      TriangleMesh mesh = extract_surface(grid);
      if (config.smooth_iterations > 0) {
        mesh = smooth(mesh, config.smooth_iterations, config.smooth_lambda);
      }
      write_obj(mesh, mesh_dir / (stem + ".obj"));
      write_stl(mesh, mesh_dir / (stem + ".stl"));
    } catch (const DegenerateGenome&) {
      // No printable phenotype for this individual.
    }
  }

  if (const Individual* best = result.best()) {
    write_genome_file(best->genome, repeat_dir / "best.leg");
  }
}

std::string manifest_text(const ExperimentConfig& config, const std::vector<RunResult>& results,
                          const std::string& status) {
  std::uint64_t total_evals = 0;
  for (const RunResult& r : results) total_evals += r.evaluations;

  std::string out;
  out += "legevo-manifest 1\n";
  out += std::string("version ") + kVersion + '\n';
  out += std::string("environment ") + to_string(config.env.kind) + '\n';
  out += "master_seed " + std::to_string(config.ga.master_seed) + '\n';
  out += "repeats " + std::to_string(config.repeats) + '\n';
  out += "pop_size " + std::to_string(config.ga.pop_size) + '\n';
  out += "generations " + std::to_string(config.ga.generations) + '\n';
  out += "status " + status + '\n';
  out += "total_evaluations " + std::to_string(total_evals) + '\n';
  for (const RunResult& r : results) {
    out += "repeat " + std::to_string(r.repeat) + " seed " + std::to_string(r.derived_seed);
    if (const Individual* best = r.best()) {
      out += " best_fitness " + format_double(best->fitness()) + " best_id " +
             std::to_string(best->genome.id);
    } else {
      out += " all_rejected";
    }
    out += " evaluations " + std::to_string(r.evaluations) + '\n';
  }
  return out;
}

}  // namespace

std::vector<RunResult> run_experiment(const ExperimentConfig& config) {
  const fs::path out_dir = config.resolved_output_dir();
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec || !fs::is_directory(out_dir)) {
    throw std::runtime_error("output directory not writable: " + out_dir.string());
  }
  write_text_file(out_dir / "config.cfg", config_to_text(config));

  std::vector<RunResult> results;
  try {
    for (int r = 0; r < config.repeats; ++r) {
      results.push_back(run_single_repeat(config, r));
      write_repeat_artifacts(config, results.back(), out_dir / ("repeat_" + zero_pad(r, 2)));
    }
    write_text_file(out_dir / "manifest.txt", manifest_text(config, results, "complete"));
  } catch (const std::exception& e) {
    std::ofstream marker(out_dir / "PARTIAL_RUN");
    marker << e.what() << '\n';
    throw;
  }
  return results;
}

std::vector<DiscoveredRun> discover_best_legs(const fs::path& root) {
  std::vector<std::pair<fs::path, EnvironmentKind>> manifests;
  if (!fs::exists(root)) throw std::runtime_error("runs directory not found: " + root.string());

  auto consider = [&](const fs::path& manifest_path) {
    std::ifstream in(manifest_path);
    if (!in) return;
    std::string word;
    EnvironmentKind kind = EnvironmentKind::kSoil;
    bool found = false;
    std::string line;
    while (std::getline(in, line)) {
      std::istringstream ls(line);
      if (ls >> word && word == "environment" && ls >> word) {
        if (auto parsed = parse_environment_kind(word)) {
          kind = *parsed;
          found = true;
        }
        break;
      }
    }
    if (found) manifests.emplace_back(manifest_path.parent_path(), kind);
  };

  if (fs::is_regular_file(root / "manifest.txt")) consider(root / "manifest.txt");
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == "manifest.txt" &&
        entry.path().parent_path() != root) {
      consider(entry.path());
    }
  }
  std::sort(manifests.begin(), manifests.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return static_cast<int>(a.second) < static_cast<int>(b.second);
    return a.first.string() < b.first.string();
  });

  std::vector<DiscoveredRun> runs;
  for (const auto& [dir, kind] : manifests) {
    std::vector<fs::path> repeat_dirs;
    for (const auto& entry : fs::directory_iterator(dir)) {
      if (entry.is_directory() && entry.path().filename().string().starts_with("repeat_")) {
        repeat_dirs.push_back(entry.path());
      }
    }
    std::sort(repeat_dirs.begin(), repeat_dirs.end());
    for (const fs::path& repeat_dir : repeat_dirs) {
      const fs::path best_path = repeat_dir / "best.leg";
      if (!fs::is_regular_file(best_path)) continue;
      DiscoveredRun run;
      run.kind = kind;
      run.repeat = std::atoi(repeat_dir.filename().string().substr(7).c_str());
      run.best = read_genome_file(best_path);
      runs.push_back(std::move(run));
    }
  }
  return runs;
}

}  // namespace legevo
