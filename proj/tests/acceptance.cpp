// Acceptance suite: one check per release criterion, each printed as a
// pass/fail line. Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <vector>

#include "oracles.hpp"
#include "salgraph/experiments.hpp"
#include "salgraph/metrics.hpp"
#include "salgraph/navigation.hpp"
#include "salgraph/positioning.hpp"
#include "salgraph/rng.hpp"
#include "salgraph/synth_world.hpp"

using namespace salgraph;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g", v);
  return buf;
}

// --- criterion 1: exact SE(2) recovery --------------------------------------

Outcome exact_recovery() {
  const auto start = std::chrono::steady_clock::now();
  Rng seeds(0xACCE01);
  double worst_shift = 0.0, worst_angle = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    Rng rng(seeds.next_u64());
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 7));
    std::vector<Vec2> u(n);
    while (true) {
      for (auto& p : u) p = {rng.uniform(-5, 5), rng.uniform(-5, 5)};
      bool spanning = false;
      for (int i = 2; i < n && !spanning; ++i) {
        if (std::fabs(cross(u[1] - u[0], u[i] - u[0])) > 1e-2) spanning = true;
      }
      if (spanning) break;
    }
    const Vec2 shift{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double heading = rng.uniform(-kPi, kPi);
    CorrespondenceSet corr;
    corr.dimension = 2;
    for (const auto& point : u) {
      const Vec2 v = rotate(point - shift, -heading);
      corr.pairs.push_back({{point.x, point.y, 0.0}, {v.x, v.y, 0.0}, rng.uniform(0.2, 1.0)});
    }
    const PoseEstimate pose = estimate_pose_2d(corr);
    worst_shift = std::max({worst_shift, std::fabs(pose.shift.x - shift.x),
                            std::fabs(pose.shift.y - shift.y)});
    worst_angle = std::max(worst_angle, angle_abs_diff(pose.orientation, heading));
  }
  const double elapsed = seconds_since(start);
  Outcome out;
  out.pass = worst_shift <= 1e-9 && worst_angle <= 1e-9 && elapsed < 5.0;
  out.detail = "max |shift err| " + fmt(worst_shift) + " m, max |angle err| " +
               fmt(worst_angle) + " rad, " + fmt(elapsed) + " s";
  return out;
}

// --- criterion 2: noise scaling in the pair count ---------------------------

Outcome noise_scaling() {
  std::vector<double> medians;
  for (const int n : {3, 5, 10, 20}) {
    std::vector<double> errors;
    for (int trial = 0; trial < 500; ++trial) {
      errors.push_back(
          run_positioning_trial(n, 0.05, derive_seed(0xACCE02, 1000 * n + trial))
              .position_error);
    }
    std::sort(errors.begin(), errors.end());
    medians.push_back(errors[errors.size() / 2]);
  }
  Outcome out;
  out.pass = medians[0] >= medians[1] && medians[1] >= medians[2] && medians[2] >= medians[3];
  out.detail = "medians " + fmt(medians[0]) + " >= " + fmt(medians[1]) + " >= " +
               fmt(medians[2]) + " >= " + fmt(medians[3]) + " m";
  return out;
}

// --- criterion 3: planner oracle equivalence --------------------------------

Outcome planner_oracle() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t comparisons = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 20 + static_cast<int>(derive_seed(0xACCE03, trial) % 81);  // up to 100
    const TopoMap map = testing::random_weighted_map(derive_seed(0xACCE04, trial), n, 0.08);
    const AllPairsPaths paths = floyd_warshall(map);
    for (std::size_t s = 0; s < map.size(); ++s) {
      const auto dist = testing::dijkstra(map, s);
      for (std::size_t t = 0; t < map.size(); ++t) {
        ++comparisons;
        if (paths.dist_matrix[s][t] != dist[t]) {
          Outcome out;
          out.detail = "mismatch on map " + std::to_string(trial);
          return out;
        }
      }
    }
  }
  const double elapsed = seconds_since(start);
  Outcome out;
  out.pass = elapsed < 10.0;
  out.detail = std::to_string(comparisons) + " exact comparisons, " + fmt(elapsed) + " s";
  return out;
}

// --- criterion 4: alignment oracle equivalence -------------------------------

SaliencyGraph360 scene_like_graph(int id, Rng& rng, const std::vector<std::string>& vocab,
                                  int nodes) {
  std::vector<ObjectInstance> objects;
  for (int i = 0; i < nodes; ++i) {
    ObjectInstance obj;
    obj.label = vocab[rng.uniform_int(0, vocab.size() - 1)];
    obj.centroid = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.2, 1.5)};
    obj.extents = {rng.uniform(0.4, 2.4), rng.uniform(0.4, 2.4), rng.uniform(0.4, 2.4)};
    objects.push_back(obj);
  }
  return build_saliency_graph(id, normalize_saliency(objects));
}

Outcome alignment_oracle() {
  const std::vector<std::string> unique_pool{"bed",   "lamp",  "tv",   "chair", "desk",
                                             "sofa",  "plant", "rug",  "table", "shelf",
                                             "piano", "safe"};
  // Fixture population: rooms of two generated buildings, trimmed to six
  // objects a side, aligned in every pairing.
  std::vector<SaliencyGraph360> rooms;
  for (const std::uint64_t seed : {0xACCE05ull, 0xACCE06ull}) {
    const SynthWorld world = generate_world(default_world_spec(12, seed));
    for (const auto& scene : world.scenes) {
      std::vector<ObjectInstance> objects;
      for (const auto& obj : world.objects) {
        if (obj.region == scene.region && objects.size() < 6) objects.push_back(obj.object);
      }
      rooms.push_back(build_saliency_graph(scene.id, normalize_saliency(objects)));
    }
  }
  double worst_ratio = 1.0;
  std::size_t pairings = 0;
  for (const auto& query : rooms) {
    for (const auto& cand : rooms) {
      const double greedy = testing::greedy_alignment_score(query, cand, 0.25);
      const double best = testing::optimal_alignment_score(query, cand, 0.25);
      if (best > 0.0) worst_ratio = std::min(worst_ratio, greedy / best);
      ++pairings;
    }
  }
  Rng rng(0xACCE07);
  bool unique_exact = true;
  for (int trial = 0; trial < 60; ++trial) {
    std::vector<std::string> labels = unique_pool;
    for (std::size_t i = labels.size(); i > 1; --i) {
      std::swap(labels[i - 1], labels[rng.uniform_int(0, i - 1)]);
    }
    std::vector<ObjectInstance> qo, co;
    for (int i = 0; i < 5; ++i) {
      ObjectInstance obj;
      obj.label = labels[i];
      obj.centroid = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.2, 1.5)};
      obj.extents = {rng.uniform(0.4, 2.4), rng.uniform(0.4, 2.4), rng.uniform(0.4, 2.4)};
      qo.push_back(obj);
      obj.centroid = {rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(0.2, 1.5)};
      co.push_back(obj);
    }
    const auto query = build_saliency_graph(0, normalize_saliency(qo));
    const auto cand = build_saliency_graph(1, normalize_saliency(co));
    const double greedy = testing::greedy_alignment_score(query, cand, 0.25);
    const double best = testing::optimal_alignment_score(query, cand, 0.25);
    if (std::fabs(greedy - best) > 1e-9) unique_exact = false;
  }
  Outcome out;
  out.pass = worst_ratio >= 0.95 && unique_exact;
  out.detail = "worst greedy/optimal " + fmt(worst_ratio) + " over " +
               std::to_string(pairings) + " pairings, label-unique exact " +
               (unique_exact ? "yes" : "no");
  return out;
}

// --- criterion 5: closed-loop graph reconstruction ---------------------------

Outcome closed_loop() {
  const SynthWorld world = generate_world(default_world_spec(12, 0xF1));
  const fs::path dir = fs::temp_directory_path() / "salgraph_acceptance_world";
  write_world(world, dir.string());
  const TopoMap map = build_topo_map_from_dir(dir.string());
  std::size_t checked = 0;
  bool all_equal = true;
  for (const MapNode* node : map.scene_nodes()) {
    const Observation obs = render_observation(world, {node->position, 0.0});
    const SaliencyGraph360 rebuilt = query_graph(obs, 0.0, node->id);
    if (!graphs_equal(*node->graph, rebuilt, 1e-12)) all_equal = false;
    ++checked;
  }
  fs::remove_all(dir);
  Outcome out;
  out.pass = all_equal && checked == 12;
  out.detail = std::to_string(checked) + " scene graphs rebuilt to 1e-12";
  return out;
}

// --- criteria 6+7: localization accuracy and perturbation ordering ----------

struct LocalizationNumbers {
  double none = 0, spatial = 0, drop50 = 0, drop66 = 0;
  double seconds = 0;
};

LocalizationNumbers localization_numbers() {
  const auto start = std::chrono::steady_clock::now();
  const SynthWorld world = generate_world(default_world_spec(42, 0xF2));
  const TopoMap map = build_topo_map(world);
  std::vector<const SaliencyGraph360*> graphs;
  for (const MapNode* node : map.scene_nodes()) graphs.push_back(&*node->graph);
  const auto poses = sample_query_poses(world, 200, 0xF3);

  auto accuracy = [&](std::optional<QueryNoise> noise) {
    const auto trials = run_localization_batch(world, graphs, poses, kTwoPi, noise, 0xF4);
    return compute_metrics({}, trials).acc;
  };
  LocalizationNumbers numbers;
  numbers.none = accuracy(std::nullopt);
  numbers.spatial = accuracy(QueryNoise{PerturbKind::kSpatial, 0.1});
  numbers.drop50 = accuracy(QueryNoise{PerturbKind::kObjectDrop, 0.5});
  numbers.drop66 = accuracy(QueryNoise{PerturbKind::kObjectDrop, 0.66});
  numbers.seconds = seconds_since(start);
  return numbers;
}

Outcome localization_accuracy(const LocalizationNumbers& numbers) {
  Outcome out;
  out.pass = numbers.none >= 0.95 && numbers.seconds < 60.0;
  out.detail = "acc " + fmt(numbers.none) + " on 200 queries / 42 scenes, " +
               fmt(numbers.seconds) + " s";
  return out;
}

Outcome perturbation_ordering(const LocalizationNumbers& numbers) {
  Outcome out;
  out.pass = numbers.none >= numbers.spatial && numbers.spatial >= numbers.drop50 &&
             numbers.drop50 >= numbers.drop66 && numbers.none > numbers.drop66;
  out.detail = fmt(numbers.none) + " >= " + fmt(numbers.spatial) + " >= " +
               fmt(numbers.drop50) + " >= " + fmt(numbers.drop66) + ", strict ends";
  return out;
}

// --- criterion 8: field-of-view ordering -------------------------------------

Outcome fov_ordering() {
  const SynthWorld world = generate_world(default_world_spec(82, 0xF5));
  const TopoMap map = build_topo_map(world);
  std::vector<const SaliencyGraph360*> graphs;
  for (const MapNode* node : map.scene_nodes()) graphs.push_back(&*node->graph);
  const auto poses = sample_query_poses(world, 200, 0xF6);

  std::vector<double> acc;
  for (const double fov_deg : {60.0, 120.0, 180.0, 360.0}) {
    const auto trials =
        run_localization_batch(world, graphs, poses, deg_to_rad(fov_deg), std::nullopt, 0);
    acc.push_back(compute_metrics({}, trials).acc);
  }
  Outcome out;
  out.pass = acc[0] < acc[1] && acc[1] < acc[2] && acc[2] < acc[3];
  out.detail = fmt(acc[0]) + " < " + fmt(acc[1]) + " < " + fmt(acc[2]) + " < " + fmt(acc[3]) +
               " over 60/120/180/360 degrees";
  return out;
}

// --- criterion 9: scaling over building sizes --------------------------------

Outcome scale_ordering() {
  const SynthWorld world = generate_world(default_world_spec(106, 0xF7));
  const TopoMap map = build_topo_map(world);
  std::vector<const SaliencyGraph360*> graphs;
  for (const MapNode* node : map.scene_nodes()) graphs.push_back(&*node->graph);
  const auto poses = sample_query_poses(world, 200, 0xF8, {0, 1, 2, 3, 4, 5});

  std::vector<double> acc;
  for (const int size : {6, 12, 42, 106}) {
    std::vector<const SaliencyGraph360*> subset;
    for (const auto* graph : graphs) {
      if (graph->scene_id < size) subset.push_back(graph);
    }
    const auto trials = run_localization_batch(world, subset, poses, kTwoPi, std::nullopt, 0);
    acc.push_back(compute_metrics({}, trials).acc);
  }
  Outcome out;
  out.pass = acc[0] >= acc[1] && acc[1] >= acc[2] && acc[2] >= acc[3] && acc[3] >= 0.80;
  out.detail = fmt(acc[0]) + " >= " + fmt(acc[1]) + " >= " + fmt(acc[2]) + " >= " + fmt(acc[3]) +
               " over 6/12/42/106 scenes";
  return out;
}

// --- criterion 10: navigation success ----------------------------------------

Outcome navigation_success() {
  const SynthWorld world = generate_world(default_world_spec(12, 0xF9));
  const TopoMap map = build_topo_map(world);

  const WorldSimulator clean(world);
  const auto noiseless = run_navigation_batch(map, world, 50, 0xFA, clean);
  const MetricsReport clean_report = compute_metrics(noiseless, {});

  const NoisySimulator tilted(world, PerturbKind::kOrientation, deg_to_rad(10.0), 0xFB);
  const auto tilted_eps = run_navigation_batch(map, world, 50, 0xFA, tilted);
  const MetricsReport tilted_report = compute_metrics(tilted_eps, {});

  const NoisySimulator dropped(world, PerturbKind::kObjectDrop, 0.66, 0xFC);
  const auto dropped_eps = run_navigation_batch(map, world, 50, 0xFA, dropped);
  const MetricsReport dropped_report = compute_metrics(dropped_eps, {});

  Outcome out;
  out.pass = clean_report.sr == 1.0 && clean_report.spl >= 0.95 &&
             tilted_report.sr >= dropped_report.sr;
  out.detail = "noiseless sr " + fmt(clean_report.sr) + " spl " + fmt(clean_report.spl) +
               "; sr(orient 10deg) " + fmt(tilted_report.sr) + " >= sr(drop66) " +
               fmt(dropped_report.sr);
  return out;
}

// --- criterion 11: graph property suite ---------------------------------------

Outcome graph_properties() {
  const auto start = std::chrono::steady_clock::now();
  const std::vector<std::string> vocab{"bed",   "lamp", "tv",    "chair", "desk",
                                       "sofa",  "rug",  "table", "shelf", "plant",
                                       "piano", "safe"};
  Rng rng(0xFD);
  SaliencyGraph360 previous;
  for (int trial = 0; trial < 1000; ++trial) {
    const SaliencyGraph360 g = scene_like_graph(trial, rng, vocab, 3 + rng.uniform_int(0, 7));
    const std::size_t n = g.size();
    for (std::size_t a = 0; a < n; ++a) {
      if (g.edges[a][a]) return {false, "diagonal edge"};
      for (std::size_t b = 0; b < n; ++b) {
        if (g.edges[a][b] != g.edges[b][a]) return {false, "asymmetric edges"};
        if (g.edge_weights[a][b] != g.edge_weights[b][a]) return {false, "asymmetric weights"};
        if (g.edge_weights[a][b] < 0.0 || g.edge_weights[a][b] > 1.0) {
          return {false, "weight out of range"};
        }
      }
    }

    // rotation covariance about Z
    const double delta = rng.uniform(0.0, kTwoPi);
    std::vector<ObjectInstance> rotated;
    for (const auto& node : g.nodes) {
      ObjectInstance obj = node.object;
      const Vec2 xy = rotate({obj.centroid.x, obj.centroid.y}, delta);
      obj.centroid.x = xy.x;
      obj.centroid.y = xy.y;
      rotated.push_back(obj);
    }
    const SaliencyGraph360 h = build_saliency_graph(trial, rotated);
    if (h.size() != n) return {false, "rotation changed the node set"};
    for (std::size_t a = 0; a < n; ++a) {
      if (angle_abs_diff(h.nodes[a].azimuth, g.nodes[a].azimuth + delta) > 1e-9) {
        return {false, "azimuth not covariant"};
      }
      if (std::fabs(h.nodes[a].polar - g.nodes[a].polar) > 1e-9) {
        return {false, "polar changed under rotation"};
      }
      if (std::fabs(h.nodes[a].radial_distance - g.nodes[a].radial_distance) > 1e-9) {
        return {false, "radial changed under rotation"};
      }
      for (std::size_t b = 0; b < n; ++b) {
        if (g.edges[a][b] != h.edges[a][b]) return {false, "edge flipped under rotation"};
        if (std::fabs(g.edge_weights[a][b] - h.edge_weights[a][b]) > 1e-12) {
          return {false, "weight drifted under rotation"};
        }
      }
    }

    // jaccard identity and symmetry, triplet-score upper bound
    if (jaccard(g, g) != 1.0) return {false, "jaccard identity broke"};
    if (trial > 0) {
      if (jaccard(g, previous) != jaccard(previous, g)) return {false, "jaccard asymmetry"};
      const Alignment alignment = align_nodes(g, previous, 0.25);
      const double score = triplet_score(g, previous, alignment);
      if (score > previous.total_edge_weight() + 1e-12) {
        return {false, "triplet score exceeded the candidate weight"};
      }
    }
    previous = g;
  }
  const double elapsed = seconds_since(start);
  Outcome out;
  out.pass = elapsed < 10.0;
  out.detail = "1000 seeded graphs, " + fmt(elapsed) + " s";
  return out;
}

}  // namespace

int main() {
  std::vector<std::pair<std::string, std::function<Outcome()>>> criteria;
  const LocalizationNumbers numbers = localization_numbers();

  criteria.emplace_back("1 exact SE(2) recovery (1000 trials)", exact_recovery);
  criteria.emplace_back("2 noise scaling over pair counts", noise_scaling);
  criteria.emplace_back("3 planner matches the shortest-path oracle", planner_oracle);
  criteria.emplace_back("4 greedy alignment near brute-force optimum", alignment_oracle);
  criteria.emplace_back("5 closed-loop graph reconstruction", closed_loop);
  criteria.emplace_back("6 noiseless localization accuracy",
                        [&] { return localization_accuracy(numbers); });
  criteria.emplace_back("7 perturbation accuracy ordering",
                        [&] { return perturbation_ordering(numbers); });
  criteria.emplace_back("8 accuracy strictly grows with field of view", fov_ordering);
  criteria.emplace_back("9 accuracy does not grow with building size", scale_ordering);
  criteria.emplace_back("10 navigation success and perturbation ordering", navigation_success);
  criteria.emplace_back("11 graph property suite", graph_properties);

  int failures = 0;
  for (auto& [name, run] : criteria) {
    Outcome outcome;
    try {
      outcome = run();
    } catch (const std::exception& err) {
      outcome.pass = false;
      outcome.detail = std::string("exception: ") + err.what();
    }
    if (!outcome.pass) ++failures;
    std::cout << (outcome.pass ? "[PASS] " : "[FAIL] ") << "criterion " << name << " — "
              << outcome.detail << "\n";
  }
  std::cout << (failures == 0 ? "acceptance: all criteria passed\n"
                              : "acceptance: " + std::to_string(failures) + " criteria failed\n");
  return failures;
}
