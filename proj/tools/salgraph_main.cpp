// Command-line surface: world generation, map building, localization,
// positioning, navigation, and the experiment drivers.

#include <filesystem>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "salgraph/experiments.hpp"
#include "salgraph/io_util.hpp"
#include "salgraph/localization.hpp"
#include "salgraph/navigation.hpp"
#include "salgraph/positioning.hpp"
#include "salgraph/synth_world.hpp"

namespace fs = std::filesystem;
using namespace salgraph;

namespace {

constexpr int kExitDomainError = 2;
constexpr int kExitUsageError = 1;

WorldSpec spec_from_json(const std::string& path, std::uint64_t seed) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open world spec: " + path);
  }
  nlohmann::json doc = nlohmann::json::parse(in);
  WorldSpec spec = default_world_spec(doc.value("rooms", 12), seed);
  spec.cell_size = doc.value("cell_size", spec.cell_size);
  spec.room_cells = doc.value("room_cells", spec.room_cells);
  spec.corridor_cells = doc.value("corridor_cells", spec.corridor_cells);
  spec.max_width = doc.value("max_width", spec.max_width);
  spec.max_height = doc.value("max_height", spec.max_height);
  spec.objects_min = doc.value("objects_min", spec.objects_min);
  spec.objects_max = doc.value("objects_max", spec.objects_max);
  spec.saliency_floor = doc.value("saliency_floor", spec.saliency_floor);
  return spec;
}

int cmd_gen_world(const std::string& spec_path, std::uint64_t seed, const std::string& out_dir) {
  const WorldSpec spec = spec_from_json(spec_path, seed);
  const SynthWorld world = generate_world(spec);
  write_world(world, out_dir);
  std::cout << "world: " << world.scenes.size() << " scenes, grid " << world.grid.width << "x"
            << world.grid.height << ", " << world.objects.size() << " objects -> " << out_dir
            << "\n";
  return 0;
}

int cmd_build_map(const std::string& world_dir, const std::string& out_path) {
  const TopoMap map = build_topo_map_from_dir(world_dir);
  save_map(map, out_path);
  std::size_t scenes = 0, transitions = 0, edges = 0;
  for (const auto& node : map.nodes) {
    (node.kind == NodeKind::kScene ? scenes : transitions) += 1;
  }
  for (std::size_t p = 0; p < map.size(); ++p) {
    for (std::size_t q = p + 1; q < map.size(); ++q) {
      edges += map.adjacency[p][q];
    }
  }
  std::cout << "map: " << scenes << " scene nodes, " << transitions << " transition nodes, "
            << edges << " edges -> " << out_path << "\n";
  return 0;
}

SaliencyGraph360 query_from_obs_file(const std::string& obs_path) {
  const std::vector<ObjectInstance> objects = read_observation_file(obs_path);
  return build_saliency_graph(-1, normalize_saliency(objects));
}

int cmd_localize(const std::string& map_path, const std::string& obs_path) {
  const TopoMap map = load_map(map_path);
  const SaliencyGraph360 query = query_from_obs_file(obs_path);

  std::vector<const SaliencyGraph360*> graphs;
  for (const auto& node : map.nodes) {
    if (node.kind == NodeKind::kScene && node.graph.has_value()) graphs.push_back(&*node.graph);
  }
  const std::vector<int> candidates = select_candidates(query, graphs);
  const LocalizationResult result = localize(query, map);
  std::cout << "scene: " << result.matched_scene_id << "\n";
  std::cout << "triplet_score: " << full17(result.triplet_score) << "\n";
  std::cout << "matched_pairs: " << result.alignment.pairs.size() << "\n";
  std::cout << "candidates:";
  for (const int id : candidates) std::cout << ' ' << id;
  std::cout << "\n";
  return 0;
}

int cmd_pose(const std::string& map_path, const std::string& obs_path) {
  const TopoMap map = load_map(map_path);
  const SaliencyGraph360 query = query_from_obs_file(obs_path);
  const LocalizationResult loc = localize(query, map);
  const PoseEstimate pose = estimate_pose(loc, query, map);
  std::cout << "scene: " << loc.matched_scene_id << "\n";
  std::cout << "shift: " << full17(pose.shift.x) << ' ' << full17(pose.shift.y) << "\n";
  std::cout << "orientation: " << full17(pose.orientation) << "\n";
  std::cout << "determinate: " << (pose.shift_determinate ? "yes" : "no") << " (rank "
            << pose.rank << ")\n";
  return 0;
}

struct NoiseArg {
  bool enabled = false;
  PerturbKind kind = PerturbKind::kSpatial;
  double magnitude = 0.0;
};

// --noise spec: "none", "spatial:<sigma_m>", "orientation:<deg>", "drop:<fraction>"
NoiseArg parse_noise(const std::string& text) {
  NoiseArg noise;
  if (text.empty() || text == "none") return noise;
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw CLI::ValidationError("--noise", "expected kind:magnitude");
  }
  const std::string kind = text.substr(0, colon);
  const double value = std::stod(text.substr(colon + 1));
  noise.enabled = true;
  if (kind == "spatial") {
    noise.kind = PerturbKind::kSpatial;
    noise.magnitude = value;
  } else if (kind == "orientation") {
    noise.kind = PerturbKind::kOrientation;
    noise.magnitude = deg_to_rad(value);
  } else if (kind == "drop") {
    noise.kind = PerturbKind::kObjectDrop;
    noise.magnitude = value;
  } else {
    throw CLI::ValidationError("--noise", "unknown kind: " + kind);
  }
  return noise;
}

int cmd_navigate(const std::string& map_path, const std::string& world_dir, int start, int goal,
                 const std::string& noise_text, std::uint64_t seed,
                 const std::string& trace_path) {
  const TopoMap map = load_map(map_path);
  const SynthWorld world = load_world(world_dir);
  const NoiseArg noise = parse_noise(noise_text);

  NavigationTrace trace;
  if (noise.enabled) {
    const NoisySimulator sim(world, noise.kind, noise.magnitude, seed);
    trace = navigate(map, start, goal, sim);
  } else {
    const WorldSimulator sim(world);
    trace = navigate(map, start, goal, sim);
  }
  if (!trace_path.empty()) {
    write_trace(trace, trace_path);
  }
  std::cout << "status: " << (trace.status == NavStatus::kSuccess ? "success" : "failed");
  if (!trace.failure_reason.empty()) std::cout << " (" << trace.failure_reason << ")";
  std::cout << "\n";
  std::cout << "shortest: " << full17(trace.shortest_length) << "\n";
  std::cout << "walked: " << full17(trace.actual_length) << " in " << trace.steps_used
            << " steps\n";
  return trace.status == NavStatus::kSuccess ? 0 : kExitDomainError;
}

int cmd_evaluate(const std::string& name, const std::string& config_path, std::uint64_t seed,
                 const std::string& out_dir) {
  ExperimentConfig config;
  if (!config_path.empty()) {
    config = load_experiment_config(config_path);
  }
  config.seed = seed;
  if (!out_dir.empty()) {
    config.out_dir = out_dir;
  }
  const ExperimentReport report = run_experiment(name, config);
  std::cout << report.table_text;
  if (!config.out_dir.empty()) {
    std::cout << "written: " << (fs::path(config.out_dir) / (report.name + ".txt")).string()
              << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"360-degree saliency-graph localization and navigation toolkit"};
  app.require_subcommand(1);

  std::string spec_path, out_dir, world_dir, map_path, obs_path, noise_text = "none";
  std::string config_path, trace_path, experiment;
  std::uint64_t seed = 0;
  int start = -1, goal = -1;

  auto* gen = app.add_subcommand("gen-world", "generate a synthetic world directory");
  gen->add_option("--spec", spec_path, "world spec JSON")->required();
  gen->add_option("--seed", seed, "generator seed")->required();
  gen->add_option("--out", out_dir, "output directory")->required();

  auto* build = app.add_subcommand("build-map", "build a topological map from a world directory");
  build->add_option("--world", world_dir, "world directory")->required();
  build->add_option("--out", map_path, "output map file")->required();

  auto* loc = app.add_subcommand("localize", "match an observation against a map");
  loc->add_option("--map", map_path, "map file")->required();
  loc->add_option("--obs", obs_path, "observation file")->required();

  auto* pose = app.add_subcommand("pose", "estimate shift and orientation within the matched scene");
  pose->add_option("--map", map_path, "map file")->required();
  pose->add_option("--obs", obs_path, "observation file")->required();

  auto* nav = app.add_subcommand("navigate", "run the control loop between two map nodes");
  nav->add_option("--map", map_path, "map file")->required();
  nav->add_option("--world", world_dir, "world directory backing the simulator")->required();
  nav->add_option("--start", start, "start node id")->required();
  nav->add_option("--goal", goal, "goal node id")->required();
  nav->add_option("--noise", noise_text, "none | spatial:<m> | orientation:<deg> | drop:<frac>");
  nav->add_option("--seed", seed, "noise seed")->required();
  nav->add_option("--trace", trace_path, "trace output file");

  auto* eval = app.add_subcommand("evaluate", "run a named experiment");
  eval->add_option("--experiment", experiment,
                   "fov-ablation | scale | perturbation | positioning-recovery | navigation")
      ->required();
  eval->add_option("--config", config_path, "experiment config JSON");
  eval->add_option("--seed", seed, "experiment seed")->required();
  eval->add_option("--out", out_dir, "directory for table files");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen->parsed()) return cmd_gen_world(spec_path, seed, out_dir);
    if (build->parsed()) return cmd_build_map(world_dir, map_path);
    if (loc->parsed()) return cmd_localize(map_path, obs_path);
    if (pose->parsed()) return cmd_pose(map_path, obs_path);
    if (nav->parsed()) return cmd_navigate(map_path, world_dir, start, goal, noise_text, seed,
                                           trace_path);
    if (eval->parsed()) return cmd_evaluate(experiment, config_path, seed, out_dir);
  } catch (const DomainError& err) {
    std::cerr << "error: " << err.what() << "\n";
    // a bad experiment name is bad usage, not a domain condition
    return err.code() == Errc::unknown_experiment ? kExitUsageError : kExitDomainError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return kExitUsageError;
  }
  return kExitUsageError;
}
