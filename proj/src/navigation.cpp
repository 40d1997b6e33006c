#include "salgraph/navigation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>

#include "salgraph/io_util.hpp"
#include "salgraph/rng.hpp"

namespace salgraph {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int index_of_node(const TopoMap& map, int id) {
  for (std::size_t i = 0; i < map.nodes.size(); ++i) {
    if (map.nodes[i].id == id) return static_cast<int>(i);
  }
  return -1;
}

}  // namespace

AllPairsPaths floyd_warshall(const TopoMap& map) {
  const std::size_t n = map.nodes.size();
  AllPairsPaths paths;
  paths.dist_matrix.assign(n, std::vector<double>(n, kInf));
  paths.next_hop.assign(n, std::vector<int>(n, -1));
  for (std::size_t i = 0; i < n; ++i) {
    paths.dist_matrix[i][i] = 0.0;
    paths.next_hop[i][i] = static_cast<int>(i);
    for (std::size_t j = 0; j < n; ++j) {
      if (map.adjacency[i][j]) {
        paths.dist_matrix[i][j] = map.edge_length[i][j];
        paths.next_hop[i][j] = static_cast<int>(j);
      }
    }
  }
  // Intermediates in ascending node-id order; strict improvement keeps the
  // lowest-id intermediate on ties.
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return map.nodes[a].id < map.nodes[b].id; });
  for (const std::size_t k : order) {
    for (std::size_t i = 0; i < n; ++i) {
      if (paths.dist_matrix[i][k] == kInf) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double through = paths.dist_matrix[i][k] + paths.dist_matrix[k][j];
        if (through < paths.dist_matrix[i][j]) {
          paths.dist_matrix[i][j] = through;
          paths.next_hop[i][j] = paths.next_hop[i][k];
        }
      }
    }
  }
  return paths;
}

PlanResult plan_route(const TopoMap& map, AllPairsPaths paths, int start_id, int goal_id) {
  const int start = index_of_node(map, start_id);
  const int goal = index_of_node(map, goal_id);
  if (start < 0 || goal < 0) {
    throw std::invalid_argument("plan_route: unknown node id");
  }
  PlanResult plan;
  plan.total_length = paths.dist_matrix[start][goal];
  if (plan.total_length != kInf) {
    int at = start;
    plan.path.push_back(map.nodes[at].id);
    while (at != goal) {
      at = paths.next_hop[at][goal];
      plan.path.push_back(map.nodes[at].id);
    }
  }
  plan.dist_matrix = std::move(paths.dist_matrix);
  plan.next_hop = std::move(paths.next_hop);
  return plan;
}

double heading_command(const AgentState& agent, const MapNode& next, const PoseEstimate& pose,
                       const TopoMap& map) {
  if (!agent.current_node.has_value()) {
    throw std::invalid_argument("heading_command: agent is not localized at a node");
  }
  const int at = index_of_node(map, *agent.current_node);
  const int to = index_of_node(map, next.id);
  if (at < 0 || to < 0 || !map.adjacency[at][to]) {
    throw DomainError(Errc::invalid_hop, "target node is not adjacent to the agent's node");
  }
  return wrap_pi(map.rel_azimuth[at][to] - pose.orientation);
}

Observation WorldSimulator::observe(const Pose2& pose, int) const {
  return render_observation(world_, pose);
}

int WorldSimulator::true_scene_at(const Vec2& position) const {
  return world_.scene_at(position);
}

bool WorldSimulator::walkable(const Vec2& position) const {
  return world_.grid.free_at(position);
}

Observation NoisySimulator::observe(const Pose2& pose, int event) const {
  const Observation clean = WorldSimulator::observe(pose, event);
  return perturb(clean, kind_, magnitude_, derive_seed(seed_, static_cast<std::uint64_t>(event)));
}

namespace {

void push_row(NavigationTrace& trace, const AgentState& agent, int node_est, double theta_r,
              const std::string& event) {
  TraceRow row;
  row.step = trace.steps_used;
  row.x = agent.position.x;
  row.y = agent.position.y;
  row.heading = agent.heading;
  row.node_est = node_est;
  row.theta_r = theta_r;
  row.event = event;
  trace.rows.push_back(std::move(row));
}

}  // namespace

NavigationTrace navigate(const TopoMap& map, int start_id, int goal_id, const NavSimulator& sim,
                         const NavPolicy& policy) {
  NavigationTrace trace;
  const int start = index_of_node(map, start_id);
  const int goal = index_of_node(map, goal_id);
  if (start < 0 || goal < 0) {
    throw std::invalid_argument("navigate: unknown node id");
  }
  if (start == goal) {
    throw std::invalid_argument("navigate: start equals goal");
  }

  const AllPairsPaths paths = floyd_warshall(map);
  trace.shortest_length = paths.dist_matrix[start][goal];
  if (trace.shortest_length == kInf) {
    trace.status = NavStatus::kFailed;
    trace.failure_reason = "goal unreachable from start";
    return trace;
  }
  int hops = 0;
  for (int at = start; at != goal; at = paths.next_hop[at][goal]) ++hops;
  trace.planned_hops = hops;
  // Per-hop slack alone cannot cover routes whose hops outrun
  // budget_factor * step_length, so the planned route length joins the
  // budget; lost episodes still terminate within a few route lengths.
  const int budget =
      policy.budget_factor * hops +
      static_cast<int>(std::ceil(2.0 * trace.shortest_length / policy.step_length));

  AgentState agent;
  agent.position = map.nodes[start].position;
  agent.heading = wrap_two_pi(policy.initial_heading);
  agent.current_node = start_id;
  const Vec2 goal_pos = map.nodes[goal].position;
  push_row(trace, agent, start_id, 0.0, "start");

  int event = 0;
  while (true) {
    if (distance(agent.position, goal_pos) <= policy.arrival_radius) {
      trace.oracle_reached = true;
      trace.status = NavStatus::kSuccess;
      push_row(trace, agent, goal_id, 0.0, "goal");
      return trace;
    }
    if (trace.steps_used >= budget) {
      trace.status = NavStatus::kFailed;
      trace.failure_reason = "step budget exhausted";
      push_row(trace, agent, -1, 0.0, "fail");
      return trace;
    }

    // Fix pose from the current panorama.
    LocalizationResult loc;
    PoseEstimate pose;
    try {
      const Observation obs = sim.observe({agent.position, agent.heading}, event);
      const SaliencyGraph360 query = query_graph(obs, policy.saliency_floor);
      loc = localize(query, map, policy.match);
      pose = estimate_pose(loc, query, map);
    } catch (const DomainError&) {
      trace.status = NavStatus::kFailed;
      trace.failure_reason = "localization lost";
      push_row(trace, agent, -1, 0.0, "lost");
      return trace;
    }
    ++event;
    trace.localization_correct.push_back(
        loc.matched_scene_id == sim.true_scene_at(agent.position) ? 1 : 0);

    const MapNode* matched = map.find_node(loc.matched_scene_id);
    const Vec2 corrected_pos = matched->position + pose.shift;
    const int at_id = map.nearest_node(corrected_pos);
    const int at = index_of_node(map, at_id);
    agent.current_node = at_id;
    push_row(trace, agent, loc.matched_scene_id, 0.0, "localize");

    // Dock onto the node so the node-frame heading law applies exactly.
    // The intended direction lives in the belief frame; a heading-estimate
    // error rotates the executed motion accordingly.
    {
      const Vec2 delta = map.nodes[at].position - corrected_pos;
      const double dock_dist = norm(delta);
      if (dock_dist > 1e-9) {
        const double executed_az =
            std::atan2(delta.y, delta.x) + (agent.heading - pose.orientation);
        const Vec2 dir{std::cos(executed_az), std::sin(executed_az)};
        double remaining = dock_dist;
        const int dock_cap = static_cast<int>(std::ceil(dock_dist / policy.step_length)) + 1;
        for (int k = 0; k < dock_cap && remaining > 1e-9 && trace.steps_used < budget; ++k) {
          const double len = std::min(policy.step_length, remaining);
          const Vec2 ahead = agent.position + dir * len;
          if (!sim.walkable(ahead)) {
            ++trace.steps_used;
            push_row(trace, agent, at_id, 0.0, "bump");
            break;
          }
          agent.position = ahead;
          remaining -= len;
          trace.actual_length += len;
          ++trace.steps_used;
          push_row(trace, agent, at_id, 0.0, "dock");
          if (distance(agent.position, goal_pos) <= policy.arrival_radius) {
            trace.oracle_reached = true;
          }
        }
      }
    }

    // Next hop; when the fix says we already sit at the goal node but the
    // arrival check above disagrees, head for the goal position itself.
    double target_azimuth;
    double hop_length;
    Vec2 hop_target;
    int hop_target_id;
    if (at == goal) {
      const Vec2 d = goal_pos - corrected_pos;
      target_azimuth = wrap_two_pi(std::atan2(d.y, d.x));
      hop_length = norm(d);
      hop_target = goal_pos;
      hop_target_id = goal_id;
    } else {
      const int next = paths.next_hop[at][goal];
      if (next < 0) {
        trace.status = NavStatus::kFailed;
        trace.failure_reason = "no route from localized node";
        push_row(trace, agent, -1, 0.0, "fail");
        return trace;
      }
      target_azimuth = map.rel_azimuth[at][next];
      hop_length = map.edge_length[at][next];
      hop_target = map.nodes[next].position;
      hop_target_id = map.nodes[next].id;
    }
    const double theta_r = wrap_pi(target_azimuth - pose.orientation);
    agent.heading = wrap_two_pi(agent.heading + theta_r);
    push_row(trace, agent, at_id, theta_r, "rotate");

    // Advance along the commanded heading. Each hop carries its own travel
    // allowance, and a walk that starts moving away from its target stops
    // early; either way the loop comes back around for a fresh fix.
    const int hop_cap =
        static_cast<int>(std::ceil(hop_length / policy.step_length)) +
        static_cast<int>(std::ceil(2.0 * policy.arrival_radius / policy.step_length)) + 2;
    const Vec2 dir{std::cos(agent.heading), std::sin(agent.heading)};
    double closest = distance(agent.position, hop_target);
    for (int walked = 0; walked < hop_cap && trace.steps_used < budget; ++walked) {
      const Vec2 ahead = agent.position + dir * policy.step_length;
      if (!sim.walkable(ahead)) {
        ++trace.steps_used;  // the bump costs a step but not distance
        push_row(trace, agent, at_id, 0.0, "bump");
        break;
      }
      agent.position = ahead;
      trace.actual_length += policy.step_length;
      ++trace.steps_used;
      push_row(trace, agent, at_id, 0.0, "step");
      if (distance(agent.position, goal_pos) <= policy.arrival_radius) {
        trace.oracle_reached = true;
      }
      const double remaining = distance(agent.position, hop_target);
      if (remaining <= policy.arrival_radius) {
        push_row(trace, agent, hop_target_id, 0.0, "arrive");
        break;
      }
      closest = std::min(closest, remaining);
      if (remaining > closest + 2.0 * policy.arrival_radius) {
        push_row(trace, agent, at_id, 0.0, "overshoot");
        break;
      }
    }
  }
}

void write_trace(const NavigationTrace& trace, const std::string& path) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write trace file: " + path);
  }
  out << "# step x y heading node_est theta_r event\n";
  for (const auto& row : trace.rows) {
    out << row.step << ' ' << fixed6(row.x) << ' ' << fixed6(row.y) << ' ' << fixed6(row.heading)
        << ' ' << row.node_est << ' ' << fixed6(row.theta_r) << ' ' << row.event << "\n";
  }
  out << "# status " << (trace.status == NavStatus::kSuccess ? "success" : "failed");
  if (!trace.failure_reason.empty()) {
    out << " (" << trace.failure_reason << ")";
  }
  out << "\n";
}

}  // namespace salgraph
