#include "salgraph/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>

#include <json.hpp>

#include "salgraph/rng.hpp"

namespace fs = std::filesystem;

namespace salgraph {

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open experiment config: " + path);
  }
  nlohmann::json doc = nlohmann::json::parse(in);
  ExperimentConfig config;
  config.seed = doc.value("seed", config.seed);
  config.queries = doc.value("queries", config.queries);
  config.episodes = doc.value("episodes", config.episodes);
  config.trials = doc.value("trials", config.trials);
  config.noise_trials = doc.value("noise_trials", config.noise_trials);
  config.out_dir = doc.value("out_dir", config.out_dir);
  return config;
}

std::vector<QueryPose> sample_query_poses(const SynthWorld& world, int count, std::uint64_t seed,
                                          const std::vector<int>& allowed_scenes) {
  // Free cells grouped by scene, in grid order.
  std::map<int, std::vector<std::pair<int, int>>> cells_by_scene;
  for (int y = 0; y < world.grid.height; ++y) {
    for (int x = 0; x < world.grid.width; ++x) {
      if (!world.grid.free_cell(x, y)) continue;
      const SceneInfo* scene = world.scene_for_region(world.grid.region[y][x]);
      if (scene == nullptr) continue;
      if (!allowed_scenes.empty() &&
          std::find(allowed_scenes.begin(), allowed_scenes.end(), scene->id) ==
              allowed_scenes.end()) {
        continue;
      }
      cells_by_scene[scene->id].emplace_back(x, y);
    }
  }
  if (cells_by_scene.empty()) {
    throw std::invalid_argument("no queryable scenes match the requested subset");
  }
  std::vector<int> scene_ids;
  for (const auto& [id, _] : cells_by_scene) scene_ids.push_back(id);

  Rng rng(derive_seed(seed, 31));
  std::vector<QueryPose> poses;
  poses.reserve(count);
  const double cs = world.grid.cell_size;
  while (static_cast<int>(poses.size()) < count) {
    const int scene_id = scene_ids[rng.uniform_int(0, scene_ids.size() - 1)];
    const auto& cells = cells_by_scene[scene_id];
    const auto [cx, cy] = cells[rng.uniform_int(0, cells.size() - 1)];
    const Vec2 center = world.grid.cell_center(cx, cy);
    QueryPose query;
    query.pose.position = {center.x + rng.uniform(-0.3, 0.3) * cs,
                           center.y + rng.uniform(-0.3, 0.3) * cs};
    query.pose.heading = rng.uniform(0.0, kTwoPi);
    query.true_scene = scene_id;
    poses.push_back(query);
  }
  return poses;
}

std::vector<LocalizationTrial> run_localization_batch(
    const SynthWorld& world, const std::vector<const SaliencyGraph360*>& graphs,
    const std::vector<QueryPose>& poses, double fov, std::optional<QueryNoise> noise,
    std::uint64_t noise_seed) {
  std::vector<LocalizationTrial> trials;
  trials.reserve(poses.size());
  for (std::size_t i = 0; i < poses.size(); ++i) {
    LocalizationTrial trial;
    try {
      Observation obs = render_observation(world, poses[i].pose, fov);
      if (noise.has_value() && noise->magnitude > 0.0) {
        obs = perturb(obs, noise->kind, noise->magnitude,
                      derive_seed(noise_seed, 97, static_cast<std::uint64_t>(i)));
      }
      const SaliencyGraph360 query = query_graph(obs);
      const LocalizationResult result = localize(query, graphs);
      trial.correct = result.matched_scene_id == poses[i].true_scene;
    } catch (const DomainError&) {
      trial.correct = false;  // empty view or no candidate survives the gate
    }
    trials.push_back(trial);
  }
  return trials;
}

PositioningTrial run_positioning_trial(int n_points, double noise_sigma, std::uint64_t seed) {
  Rng rng(seed);
  CorrespondenceSet corr;
  corr.dimension = 2;

  // Reference points in a room-sized box, rejected until they span a plane.
  std::vector<Vec2> u;
  while (true) {
    u.clear();
    for (int i = 0; i < n_points; ++i) {
      u.push_back({rng.uniform(-5.0, 5.0), rng.uniform(-5.0, 5.0)});
    }
    bool spanning = false;
    for (int i = 2; i < n_points && !spanning; ++i) {
      const double area = cross(u[1] - u[0], u[i] - u[0]);
      if (std::fabs(area) > 1e-3) spanning = true;
    }
    if (spanning) break;
  }

  const Vec2 shift{rng.uniform(-2.0, 2.0), rng.uniform(-2.0, 2.0)};
  const double heading = wrap_pi(rng.uniform(-kPi, kPi));
  for (int i = 0; i < n_points; ++i) {
    Correspondence pair;
    pair.u = {u[i].x, u[i].y, 0.0};
    const Vec2 v = rotate(u[i] - shift, -heading);
    pair.v = {v.x + noise_sigma * rng.normal(), v.y + noise_sigma * rng.normal(), 0.0};
    pair.saliency = rng.uniform(0.2, 1.0);
    corr.pairs.push_back(pair);
  }

  const PoseEstimate pose = estimate_pose_2d(corr);
  PositioningTrial trial;
  trial.position_error = distance(pose.shift, shift);
  trial.orientation_error = angle_abs_diff(pose.orientation, heading);
  return trial;
}

std::vector<EpisodeRecord> run_navigation_batch(const TopoMap& map, const SynthWorld& world,
                                                int episodes, std::uint64_t seed,
                                                const NavSimulator& sim,
                                                const NavPolicy& policy) {
  std::vector<int> scene_ids;
  for (const auto& scene : world.scenes) scene_ids.push_back(scene.id);
  Rng rng(derive_seed(seed, 53));
  std::vector<EpisodeRecord> records;
  records.reserve(episodes);
  for (int e = 0; e < episodes; ++e) {
    const int start = scene_ids[rng.uniform_int(0, scene_ids.size() - 1)];
    int goal = start;
    while (goal == start) {
      goal = scene_ids[rng.uniform_int(0, scene_ids.size() - 1)];
    }
    const NavigationTrace trace = navigate(map, start, goal, sim, policy);
    records.push_back(episode_from_trace(trace));
  }
  return records;
}

namespace {

std::vector<const SaliencyGraph360*> map_graphs(const TopoMap& map) {
  std::vector<const SaliencyGraph360*> graphs;
  for (const auto& node : map.nodes) {
    if (node.kind == NodeKind::kScene && node.graph.has_value()) graphs.push_back(&*node.graph);
  }
  return graphs;
}

ExperimentReport fov_ablation(const ExperimentConfig& config) {
  const SynthWorld world = generate_world(default_world_spec(82, config.seed));
  const TopoMap map = build_topo_map(world);
  const auto graphs = map_graphs(map);
  const auto poses = sample_query_poses(world, config.queries, derive_seed(config.seed, 1));

  ExperimentReport report;
  report.name = "fov-ablation";
  for (const double fov_deg : {60.0, 120.0, 180.0, 360.0}) {
    const auto trials =
        run_localization_batch(world, graphs, poses, deg_to_rad(fov_deg), std::nullopt, 0);
    report.rows.emplace_back("fov" + std::to_string(static_cast<int>(fov_deg)),
                             compute_metrics({}, trials));
  }
  report.table_text =
      format_metrics_table("localization accuracy by field of view (82 scenes)", {"acc"},
                           report.rows);
  report.tsv_text = metrics_table_tsv({"acc"}, report.rows);
  return report;
}

ExperimentReport scale(const ExperimentConfig& config) {
  const SynthWorld world = generate_world(default_world_spec(106, config.seed));
  const TopoMap map = build_topo_map(world);
  const auto graphs = map_graphs(map);

  // A fixed query pool over the scenes present at every size keeps the
  // candidate set of a query growing with the map, so accuracy cannot rise
  // with scale by construction.
  const std::vector<int> common_scenes{0, 1, 2, 3, 4, 5};
  const auto poses =
      sample_query_poses(world, config.queries, derive_seed(config.seed, 2), common_scenes);

  ExperimentReport report;
  report.name = "scale";
  for (const int size : {6, 12, 42, 106}) {
    std::vector<const SaliencyGraph360*> subset;
    for (const SaliencyGraph360* graph : graphs) {
      if (graph->scene_id < size) subset.push_back(graph);
    }
    const auto trials = run_localization_batch(world, subset, poses, kTwoPi, std::nullopt, 0);
    report.rows.emplace_back("scenes" + std::to_string(size), compute_metrics({}, trials));
  }
  report.table_text = format_metrics_table(
      "localization accuracy by building size (fixed query pool)", {"acc"}, report.rows);
  report.tsv_text = metrics_table_tsv({"acc"}, report.rows);
  return report;
}

ExperimentReport perturbation(const ExperimentConfig& config) {
  // Localization side: the 42-scene corpus.
  const SynthWorld loc_world = generate_world(default_world_spec(42, config.seed));
  const TopoMap loc_map = build_topo_map(loc_world);
  const auto loc_graphs = map_graphs(loc_map);
  const auto poses =
      sample_query_poses(loc_world, config.queries, derive_seed(config.seed, 3));

  // Navigation side: the 12-scene fixture.
  const SynthWorld nav_world = generate_world(default_world_spec(12, config.seed));
  const TopoMap nav_map = build_topo_map(nav_world);

  struct Condition {
    const char* name;
    std::optional<QueryNoise> noise;
  };
  const Condition conditions[] = {
      {"none", std::nullopt},
      {"spatial_0.1m", QueryNoise{PerturbKind::kSpatial, 0.1}},
      {"orientation_10deg", QueryNoise{PerturbKind::kOrientation, deg_to_rad(10.0)}},
      {"drop_50%", QueryNoise{PerturbKind::kObjectDrop, 0.5}},
      {"drop_66%", QueryNoise{PerturbKind::kObjectDrop, 0.66}},
  };

  ExperimentReport report;
  report.name = "perturbation";
  for (const auto& condition : conditions) {
    const auto loc_trials = run_localization_batch(loc_world, loc_graphs, poses, kTwoPi,
                                                   condition.noise, derive_seed(config.seed, 4));
    std::vector<EpisodeRecord> episodes;
    if (!condition.noise.has_value()) {
      const WorldSimulator sim(nav_world);
      episodes = run_navigation_batch(nav_map, nav_world, config.episodes,
                                      derive_seed(config.seed, 5), sim);
    } else {
      const NoisySimulator sim(nav_world, condition.noise->kind, condition.noise->magnitude,
                               derive_seed(config.seed, 6));
      episodes = run_navigation_batch(nav_map, nav_world, config.episodes,
                                      derive_seed(config.seed, 5), sim);
    }
    report.rows.emplace_back(condition.name, compute_metrics(episodes, loc_trials));
  }
  report.table_text = format_metrics_table(
      "perturbation analysis (acc: 42 scenes; sr/spl: 12-scene fixture)", {"acc", "sr", "spl"},
      report.rows);
  report.tsv_text = metrics_table_tsv({"acc", "sr", "spl"}, report.rows);
  return report;
}

ExperimentReport positioning_recovery(const ExperimentConfig& config) {
  ExperimentReport report;
  report.name = "positioning-recovery";

  std::vector<PositioningTrial> noiseless;
  Rng size_rng(derive_seed(config.seed, 7));
  for (int t = 0; t < config.trials; ++t) {
    const int n = static_cast<int>(size_rng.uniform_int(3, 10));
    noiseless.push_back(run_positioning_trial(n, 0.0, derive_seed(config.seed, 8, t)));
  }
  report.rows.emplace_back("noiseless_mean", compute_metrics({}, {}, noiseless));

  for (const int n : {3, 5, 10, 20}) {
    std::vector<double> errors;
    std::vector<PositioningTrial> trials;
    for (int t = 0; t < config.noise_trials; ++t) {
      trials.push_back(
          run_positioning_trial(n, 0.05, derive_seed(config.seed, 9, 1000 * n + t)));
      errors.push_back(trials.back().position_error);
    }
    std::sort(errors.begin(), errors.end());
    MetricsReport row = compute_metrics({}, {}, trials);
    row.e_p = errors[errors.size() / 2];  // median, the scaling statistic
    report.rows.emplace_back("noise0.05_N" + std::to_string(n), row);
  }
  report.table_text = format_metrics_table(
      "pose recovery (noiseless mean; noisy rows report the median e_p)", {"e_p", "e_theta"},
      report.rows);
  report.tsv_text = metrics_table_tsv({"e_p", "e_theta"}, report.rows);
  return report;
}

ExperimentReport navigation_experiment(const ExperimentConfig& config) {
  const SynthWorld world = generate_world(default_world_spec(12, config.seed));
  const TopoMap map = build_topo_map(world);
  const WorldSimulator sim(world);
  const auto episodes =
      run_navigation_batch(map, world, config.episodes, derive_seed(config.seed, 10), sim);

  ExperimentReport report;
  report.name = "navigation";
  report.rows.emplace_back("noiseless", compute_metrics(episodes, {}));
  report.table_text = format_metrics_table("navigation on the 12-scene fixture",
                                           {"sr", "osr", "spl"}, report.rows);
  report.tsv_text = metrics_table_tsv({"sr", "osr", "spl"}, report.rows);
  return report;
}

}  // namespace

ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& config) {
  ExperimentReport report;
  if (name == "fov-ablation") {
    report = fov_ablation(config);
  } else if (name == "scale") {
    report = scale(config);
  } else if (name == "perturbation") {
    report = perturbation(config);
  } else if (name == "positioning-recovery") {
    report = positioning_recovery(config);
  } else if (name == "navigation") {
    report = navigation_experiment(config);
  } else {
    throw DomainError(Errc::unknown_experiment, "no experiment named '" + name + "'");
  }
  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    std::ofstream txt(fs::path(config.out_dir) / (report.name + ".txt"));
    txt << report.table_text;
    std::ofstream tsv(fs::path(config.out_dir) / (report.name + ".tsv"));
    tsv << report.tsv_text;
  }
  return report;
}

}  // namespace salgraph
