#include "salgraph/topo_map.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "salgraph/io_util.hpp"

namespace fs = std::filesystem;

namespace salgraph {

const MapNode* TopoMap::find_node(int id) const {
  for (const auto& node : nodes) {
    if (node.id == id) return &node;
  }
  return nullptr;
}

const MapNode* TopoMap::scene_node_for_region(int region) const {
  for (const auto& node : nodes) {
    if (node.kind == NodeKind::kScene && node.region == region) return &node;
  }
  return nullptr;
}

std::vector<const MapNode*> TopoMap::scene_nodes() const {
  std::vector<const MapNode*> out;
  for (const auto& node : nodes) {
    if (node.kind == NodeKind::kScene) out.push_back(&node);
  }
  return out;
}

int TopoMap::nearest_node(const Vec2& p) const {
  int best = -1;
  double best_d = 0.0;
  for (const auto& node : nodes) {
    const double d = distance(node.position, p);
    if (best < 0 || d < best_d) {
      best = node.id;
      best_d = d;
    }
  }
  return best;
}

std::vector<Vec2> detect_transition_nodes(const FloorGrid& grid) {
  validate_grid(grid);
  std::vector<std::vector<std::uint8_t>> boundary(grid.height,
                                                  std::vector<std::uint8_t>(grid.width, 0));
  const int dx4[] = {1, -1, 0, 0};
  const int dy4[] = {0, 0, 1, -1};
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (!grid.free_cell(x, y)) continue;
      for (int k = 0; k < 4; ++k) {
        const int nx = x + dx4[k], ny = y + dy4[k];
        if (grid.free_cell(nx, ny) && grid.region[ny][nx] != grid.region[y][x]) {
          boundary[y][x] = 1;
          break;
        }
      }
    }
  }

  // Flood-fill boundary cells with 8-connectivity; clusters scan in row-major
  // order so the output sequence is deterministic.
  std::vector<Vec2> points;
  std::vector<std::vector<std::uint8_t>> seen(grid.height,
                                              std::vector<std::uint8_t>(grid.width, 0));
  for (int y = 0; y < grid.height; ++y) {
    for (int x = 0; x < grid.width; ++x) {
      if (!boundary[y][x] || seen[y][x]) continue;
      std::vector<std::pair<int, int>> stack{{x, y}};
      seen[y][x] = 1;
      double sum_x = 0.0, sum_y = 0.0;
      int count = 0;
      while (!stack.empty()) {
        const auto [cx, cy] = stack.back();
        stack.pop_back();
        const Vec2 center = grid.cell_center(cx, cy);
        sum_x += center.x;
        sum_y += center.y;
        ++count;
        for (int ddy = -1; ddy <= 1; ++ddy) {
          for (int ddx = -1; ddx <= 1; ++ddx) {
            const int nx = cx + ddx, ny = cy + ddy;
            if (!grid.in_bounds(nx, ny) || seen[ny][nx] || !boundary[ny][nx]) continue;
            seen[ny][nx] = 1;
            stack.emplace_back(nx, ny);
          }
        }
      }
      points.push_back({sum_x / count, sum_y / count});
    }
  }
  return points;
}

VisibilityResult build_visibility_adjacency(const std::vector<MapNode>& nodes,
                                            const FloorGrid& grid) {
  const std::size_t n = nodes.size();
  for (const auto& node : nodes) {
    if (!grid.free_at(node.position)) {
      throw std::invalid_argument("map node position lies on an obstructed cell");
    }
  }
  VisibilityResult vis;
  vis.adjacency.assign(n, std::vector<std::uint8_t>(n, 0));
  vis.edge_length.assign(n, std::vector<double>(n, 0.0));
  vis.rel_azimuth.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (!segment_clear(grid, nodes[p].position, nodes[q].position)) continue;
      const Vec2 d = nodes[q].position - nodes[p].position;
      vis.adjacency[p][q] = vis.adjacency[q][p] = 1;
      vis.edge_length[p][q] = vis.edge_length[q][p] = norm(d);
      const double azimuth_pq = wrap_two_pi(std::atan2(d.y, d.x));
      vis.rel_azimuth[p][q] = azimuth_pq;
      vis.rel_azimuth[q][p] = wrap_two_pi(azimuth_pq + kPi);
    }
  }

  // Reachability check; navigation needs one component.
  std::vector<std::uint8_t> reached(n, 0);
  std::vector<std::size_t> stack{0};
  if (n > 0) reached[0] = 1;
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    for (std::size_t q = 0; q < n; ++q) {
      if (vis.adjacency[p][q] && !reached[q]) {
        reached[q] = 1;
        stack.push_back(q);
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!reached[p]) {
      throw DomainError(Errc::disconnected_map,
                        "node " + std::to_string(nodes[p].id) + " is unreachable");
    }
  }
  return vis;
}

TopoMap make_topo_map(std::vector<MapNode> nodes, const FloorGrid& grid) {
  VisibilityResult vis = build_visibility_adjacency(nodes, grid);
  TopoMap map;
  map.nodes = std::move(nodes);
  map.adjacency = std::move(vis.adjacency);
  map.edge_length = std::move(vis.edge_length);
  map.rel_azimuth = std::move(vis.rel_azimuth);
  validate_topo_map(map);
  return map;
}

void validate_topo_map(const TopoMap& map) {
  const std::size_t n = map.nodes.size();
  if (n == 0) {
    throw DomainError(Errc::corrupt_map, "map has no nodes");
  }
  if (map.adjacency.size() != n || map.edge_length.size() != n || map.rel_azimuth.size() != n) {
    throw DomainError(Errc::corrupt_map, "matrix dimensions do not match node count");
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (map.adjacency[p].size() != n || map.edge_length[p].size() != n ||
        map.rel_azimuth[p].size() != n) {
      throw DomainError(Errc::corrupt_map, "matrix rows do not match node count");
    }
    for (std::size_t q = 0; q < p; ++q) {
      if (map.adjacency[p][q] != map.adjacency[q][p]) {
        throw DomainError(Errc::corrupt_map, "adjacency is not symmetric");
      }
      if (!map.adjacency[p][q]) continue;
      if (std::fabs(map.edge_length[p][q] - map.edge_length[q][p]) > 1e-9) {
        throw DomainError(Errc::corrupt_map, "edge lengths are not symmetric");
      }
      const double expected = distance(map.nodes[p].position, map.nodes[q].position);
      if (std::fabs(map.edge_length[p][q] - expected) > 1e-9) {
        throw DomainError(Errc::corrupt_map, "edge length disagrees with node positions");
      }
      const Vec2 d = map.nodes[q].position - map.nodes[p].position;
      if (angle_abs_diff(map.rel_azimuth[p][q], std::atan2(d.y, d.x)) > 1e-9) {
        throw DomainError(Errc::corrupt_map, "azimuth disagrees with node positions");
      }
      if (angle_abs_diff(map.rel_azimuth[q][p], map.rel_azimuth[p][q] + kPi) > 1e-9) {
        throw DomainError(Errc::corrupt_map, "reverse azimuth is not forward + pi");
      }
    }
    if (map.adjacency[p][p]) {
      throw DomainError(Errc::corrupt_map, "self-loop in adjacency");
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (map.nodes[i].id == map.nodes[j].id) {
        throw DomainError(Errc::corrupt_map, "duplicate node id");
      }
    }
    if (map.nodes[i].kind == NodeKind::kScene && !map.nodes[i].graph.has_value()) {
      throw DomainError(Errc::corrupt_map,
                        "scene node " + std::to_string(map.nodes[i].id) + " lacks a graph");
    }
  }

  // Connectivity over the stored adjacency.
  std::vector<std::uint8_t> reached(n, 0);
  std::vector<std::size_t> stack{0};
  reached[0] = 1;
  while (!stack.empty()) {
    const std::size_t p = stack.back();
    stack.pop_back();
    for (std::size_t q = 0; q < n; ++q) {
      if (map.adjacency[p][q] && !reached[q]) {
        reached[q] = 1;
        stack.push_back(q);
      }
    }
  }
  for (std::size_t p = 0; p < n; ++p) {
    if (!reached[p]) {
      throw DomainError(Errc::corrupt_map, "stored map is disconnected");
    }
  }
}

void save_map(const TopoMap& map, const std::string& path) {
  validate_topo_map(map);
  const fs::path map_path(path);
  const fs::path dir = map_path.has_parent_path() ? map_path.parent_path() : fs::path(".");
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write map file: " + path);
  }
  out << "TOPOMAP v1\n";
  for (const auto& node : map.nodes) {
    out << node.id << ' ' << (node.kind == NodeKind::kScene ? "SCENE" : "TRANSITION") << ' '
        << full17(node.position.x) << ' ' << full17(node.position.y) << ' ' << node.region;
    if (node.graph.has_value()) {
      const std::string graph_file = "scene_" + std::to_string(node.id) + ".salg";
      out << ' ' << graph_file;
      write_saliency_graph_file((dir / graph_file).string(), *node.graph);
    }
    out << "\n";
  }
  const std::size_t n = map.nodes.size();
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = p + 1; q < n; ++q) {
      if (!map.adjacency[p][q]) continue;
      out << map.nodes[p].id << ' ' << map.nodes[q].id << ' ' << full17(map.edge_length[p][q])
          << ' ' << full17(map.rel_azimuth[p][q]) << "\n";
    }
  }
}

TopoMap load_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open map file: " + path);
  }
  const fs::path dir =
      fs::path(path).has_parent_path() ? fs::path(path).parent_path() : fs::path(".");
  std::string header;
  if (!std::getline(in, header)) {
    throw std::runtime_error("empty map file: " + path);
  }
  {
    std::istringstream h(header);
    std::string magic, version;
    h >> magic >> version;
    if (magic != "TOPOMAP") {
      throw std::runtime_error("not a TOPOMAP file: " + path);
    }
    if (version != "v1") {
      throw DomainError(Errc::unsupported_version, "map file version " + version);
    }
  }

  TopoMap map;
  std::vector<std::tuple<int, int, double, double>> edge_rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string first, second;
    row >> first >> second;
    if (second == "SCENE" || second == "TRANSITION") {
      MapNode node;
      node.id = std::stoi(first);
      node.kind = second == "SCENE" ? NodeKind::kScene : NodeKind::kTransition;
      std::istringstream rest(line);
      std::string skip_id, skip_kind, graph_file;
      rest >> skip_id >> skip_kind >> node.position.x >> node.position.y >> node.region;
      if (rest >> graph_file) {
        node.graph = read_saliency_graph_file((dir / graph_file).string());
      }
      if (node.kind == NodeKind::kScene && !node.graph.has_value()) {
        throw DomainError(Errc::corrupt_map, "scene node line without graph reference");
      }
      map.nodes.push_back(std::move(node));
    } else {
      std::istringstream rest(line);
      int p = 0, q = 0;
      double length = 0.0, azimuth = 0.0;
      if (!(rest >> p >> q >> length >> azimuth)) {
        throw DomainError(Errc::corrupt_map, "malformed adjacency line: " + line);
      }
      edge_rows.emplace_back(p, q, length, azimuth);
    }
  }

  const std::size_t n = map.nodes.size();
  std::vector<int> index_of_id;
  for (std::size_t i = 0; i < n; ++i) {
    if (map.nodes[i].id < 0) {
      throw DomainError(Errc::corrupt_map, "negative node id");
    }
    index_of_id.resize(std::max<std::size_t>(index_of_id.size(), map.nodes[i].id + 1), -1);
    if (index_of_id[map.nodes[i].id] != -1) {
      throw DomainError(Errc::corrupt_map, "duplicate node id");
    }
    index_of_id[map.nodes[i].id] = static_cast<int>(i);
  }
  map.adjacency.assign(n, std::vector<std::uint8_t>(n, 0));
  map.edge_length.assign(n, std::vector<double>(n, 0.0));
  map.rel_azimuth.assign(n, std::vector<double>(n, 0.0));
  for (const auto& [pid, qid, length, azimuth] : edge_rows) {
    if (pid < 0 || qid < 0 || pid >= static_cast<int>(index_of_id.size()) ||
        qid >= static_cast<int>(index_of_id.size()) || index_of_id[pid] < 0 ||
        index_of_id[qid] < 0) {
      throw DomainError(Errc::corrupt_map, "adjacency references unknown node");
    }
    const int p = index_of_id[pid], q = index_of_id[qid];
    if (p == q) {
      throw DomainError(Errc::corrupt_map, "self-loop in adjacency");
    }
    if (map.adjacency[p][q] &&
        (map.edge_length[p][q] != length ||
         angle_abs_diff(map.rel_azimuth[p][q], azimuth) > 1e-12)) {
      throw DomainError(Errc::corrupt_map, "conflicting duplicate adjacency lines");
    }
    map.adjacency[p][q] = map.adjacency[q][p] = 1;
    map.edge_length[p][q] = map.edge_length[q][p] = length;
    map.rel_azimuth[p][q] = azimuth;
    map.rel_azimuth[q][p] = wrap_two_pi(azimuth + kPi);
  }
  validate_topo_map(map);
  return map;
}

}  // namespace salgraph
