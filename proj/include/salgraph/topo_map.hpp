#pragma once

#include <optional>
#include <string>
#include <vector>

#include "salgraph/grid.hpp"
#include "salgraph/scene_graph.hpp"

namespace salgraph {

enum class NodeKind { kScene, kTransition };

struct MapNode {
  int id = -1;
  NodeKind kind = NodeKind::kScene;
  Vec2 position;  // metres
  int region = 0;
  std::optional<SaliencyGraph360> graph;  // required for scene nodes
};

// Queryable topological map: scene and transition nodes plus visibility
// adjacency with edge lengths and directed azimuths.
struct TopoMap {
  std::vector<MapNode> nodes;
  std::vector<std::vector<std::uint8_t>> adjacency;  // symmetric, zero diagonal
  std::vector<std::vector<double>> edge_length;      // metres where adjacent
  std::vector<std::vector<double>> rel_azimuth;      // [p][q] = heading p -> q

  std::size_t size() const { return nodes.size(); }
  const MapNode* find_node(int id) const;
  const MapNode* scene_node_for_region(int region) const;
  std::vector<const MapNode*> scene_nodes() const;
  // Index of the node whose position is nearest to p (ties to lower id).
  int nearest_node(const Vec2& p) const;
};

// One point per doorway: free cells 4-adjacent to a free cell of another
// region are boundary cells; 8-connected boundary clusters each yield the
// centroid of their cell centers.
std::vector<Vec2> detect_transition_nodes(const FloorGrid& grid);

struct VisibilityResult {
  std::vector<std::vector<std::uint8_t>> adjacency;
  std::vector<std::vector<double>> edge_length;
  std::vector<std::vector<double>> rel_azimuth;
};

// Connects every node pair whose straight segment crosses only free cells.
// Throws DisconnectedMap when some node is unreachable.
VisibilityResult build_visibility_adjacency(const std::vector<MapNode>& nodes,
                                            const FloorGrid& grid);

// Assembles and validates a full map from its parts.
TopoMap make_topo_map(std::vector<MapNode> nodes, const FloorGrid& grid);

// Structure checks shared by construction and load; throws CorruptMap.
void validate_topo_map(const TopoMap& map);

// TOPOMAP v1 file: header line, node lines `id kind x y region [graph-file]`,
// one adjacency line `p q length azimuth_pq` per undirected edge (p < q).
// Graph files are stored next to the map file. Reals round-trip bit-exactly
// at 17 significant digits.
void save_map(const TopoMap& map, const std::string& path);
TopoMap load_map(const std::string& path);

}  // namespace salgraph
