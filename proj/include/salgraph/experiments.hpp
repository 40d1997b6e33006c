#pragma once

#include <optional>
#include <string>
#include <vector>

#include "salgraph/metrics.hpp"
#include "salgraph/navigation.hpp"
#include "salgraph/synth_world.hpp"

namespace salgraph {

struct ExperimentConfig {
  std::uint64_t seed = 11;
  int queries = 200;       // localization queries per condition
  int episodes = 50;       // navigation episodes per condition
  int trials = 1000;       // noiseless positioning trials
  int noise_trials = 500;  // positioning trials per correspondence count
  std::string out_dir;     // table files land here when nonempty
};

// Reads overrides from a small JSON file; missing keys keep their defaults.
ExperimentConfig load_experiment_config(const std::string& path);

struct ExperimentReport {
  std::string name;
  std::vector<std::pair<std::string, MetricsReport>> rows;
  std::string table_text;
  std::string tsv_text;
};

// Named experiment drivers; throws UnknownExperiment for anything else.
// Known names: fov-ablation, scale, perturbation, positioning-recovery,
// navigation.
ExperimentReport run_experiment(const std::string& name, const ExperimentConfig& config);

// --- shared building blocks (also used by the acceptance suite) -------------

struct QueryPose {
  Pose2 pose;
  int true_scene = -1;
};

// Seeded query poses on free cells, optionally restricted to a scene-id
// subset; headings are uniform.
std::vector<QueryPose> sample_query_poses(const SynthWorld& world, int count, std::uint64_t seed,
                                          const std::vector<int>& allowed_scenes = {});

struct QueryNoise {
  PerturbKind kind = PerturbKind::kSpatial;
  double magnitude = 0.0;
};

// Render + optional perturbation + localization for every pose; failures
// (empty view, no candidates) count as incorrect.
std::vector<LocalizationTrial> run_localization_batch(
    const SynthWorld& world, const std::vector<const SaliencyGraph360*>& graphs,
    const std::vector<QueryPose>& poses, double fov, std::optional<QueryNoise> noise,
    std::uint64_t noise_seed);

// One synthetic rigid-alignment problem: correspondences, a hidden shift and
// heading, optional measurement noise on the query side.
PositioningTrial run_positioning_trial(int n_points, double noise_sigma, std::uint64_t seed);

// Seeded random start/goal scene pairs navigated with the given simulator.
std::vector<EpisodeRecord> run_navigation_batch(const TopoMap& map, const SynthWorld& world,
                                                int episodes, std::uint64_t seed,
                                                const NavSimulator& sim,
                                                const NavPolicy& policy = {});

}  // namespace salgraph
