#pragma once

#include <optional>
#include <string>
#include <vector>

#include "salgraph/localization.hpp"
#include "salgraph/positioning.hpp"
#include "salgraph/synth_world.hpp"
#include "salgraph/topo_map.hpp"

namespace salgraph {

struct AgentState {
  Vec2 position;
  double heading = 0.0;  // [0, 2*pi)
  std::optional<int> current_node;
};

// All-pairs shortest paths with successor reconstruction. Matrices are
// indexed by node position in TopoMap::nodes; ties prefer the intermediate
// node with the lower id.
struct AllPairsPaths {
  std::vector<std::vector<double>> dist_matrix;  // +inf when unreachable
  std::vector<std::vector<int>> next_hop;        // node index, -1 when unreachable
};

AllPairsPaths floyd_warshall(const TopoMap& map);

struct PlanResult {
  std::vector<int> path;  // node ids from start to goal
  double total_length = 0.0;
  std::vector<std::vector<double>> dist_matrix;
  std::vector<std::vector<int>> next_hop;
};

// Path reconstruction between two node ids over precomputed tables.
PlanResult plan_route(const TopoMap& map, AllPairsPaths paths, int start_id, int goal_id);

// Rotation that lines the corrected heading up with the map edge toward
// `next`; requires the agent to be localized at a node adjacent to it.
double heading_command(const AgentState& agent, const MapNode& next, const PoseEstimate& pose,
                       const TopoMap& map);

// Observation feed for a navigation episode. `event` counts localization
// rounds so that seeded measurement noise is reproducible. walkable() keeps
// the agent inside free space: a step into an obstructed cell is a bump,
// the agent stays put and takes a fresh fix.
class NavSimulator {
 public:
  virtual ~NavSimulator() = default;
  virtual Observation observe(const Pose2& pose, int event) const = 0;
  virtual int true_scene_at(const Vec2& position) const = 0;
  virtual bool walkable(const Vec2& position) const = 0;
};

// Noise-free feed over a synthetic world.
class WorldSimulator : public NavSimulator {
 public:
  explicit WorldSimulator(const SynthWorld& world) : world_(world) {}
  Observation observe(const Pose2& pose, int event) const override;
  int true_scene_at(const Vec2& position) const override;
  bool walkable(const Vec2& position) const override;

 protected:
  const SynthWorld& world_;
};

// Applies one perturbation kind to every rendered observation, seeded per
// localization event.
class NoisySimulator : public WorldSimulator {
 public:
  NoisySimulator(const SynthWorld& world, PerturbKind kind, double magnitude, std::uint64_t seed)
      : WorldSimulator(world), kind_(kind), magnitude_(magnitude), seed_(seed) {}
  Observation observe(const Pose2& pose, int event) const override;

 private:
  PerturbKind kind_;
  double magnitude_;
  std::uint64_t seed_;
};

struct NavPolicy {
  double step_length = 0.1;     // metres per control step
  double arrival_radius = 0.25; // metres
  int budget_factor = 50;       // steps allowed per planned hop
  double initial_heading = 0.0;
  double saliency_floor = 0.0;
  MatchConfig match;
};

enum class NavStatus { kSuccess, kFailed };

struct TraceRow {
  int step = 0;
  double x = 0.0, y = 0.0, heading = 0.0;
  int node_est = -1;
  double theta_r = 0.0;
  std::string event;
};

struct NavigationTrace {
  NavStatus status = NavStatus::kFailed;
  std::string failure_reason;
  std::vector<TraceRow> rows;
  double shortest_length = 0.0;  // planner distance start -> goal
  double actual_length = 0.0;    // distance walked
  int steps_used = 0;
  int planned_hops = 0;
  bool oracle_reached = false;   // some trace point entered the goal radius
  std::vector<std::uint8_t> localization_correct;  // one flag per localization
};

// Iterative control loop: observe, localize, estimate pose, plan the next
// hop, rotate, advance. Re-localization happens at every node arrival and
// whenever a hop overruns its own travel allowance, so heading errors are
// corrected at the next fix instead of burning the whole budget. A lost
// localization (no candidates, too few matches) ends the episode as a
// failure; the trace is always returned.
NavigationTrace navigate(const TopoMap& map, int start_id, int goal_id, const NavSimulator& sim,
                         const NavPolicy& policy = {});

// Trace file: one `step x y heading node_est theta_r event` row per record.
void write_trace(const NavigationTrace& trace, const std::string& path);

}  // namespace salgraph
