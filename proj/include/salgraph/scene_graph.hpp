#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "salgraph/geometry.hpp"

namespace salgraph {

// A detected scene object. Centroid is expressed in the scene frame whose
// origin is the capture point of the panorama.
struct ObjectInstance {
  std::string label;
  Vec3 centroid;       // metres
  Vec3 extents;        // bounding-box dimensions, metres, componentwise >= 0
  double saliency = 0.0;  // in [0, 1] once normalized

  double volume() const { return extents.x * extents.y * extents.z; }
};

// A salient object wrapped as a graph node with its spherical orientation
// relative to the capture point.
struct SalientNode {
  ObjectInstance object;
  double mean_dimension = 0.0;  // arithmetic mean of the three extents
  double azimuth = 0.0;         // [0, 2*pi), from +X
  double polar = 0.0;           // [0, pi], from +Z (up)
  double radial_distance = 0.0; // metres
};

// Scene summary of a full panorama: salient objects as nodes, contextual
// proximity edges, and semantic edge weights sqrt(S_a * S_b).
struct SaliencyGraph360 {
  int scene_id = -1;
  std::vector<SalientNode> nodes;
  std::vector<std::vector<std::uint8_t>> edges;   // symmetric, zero diagonal
  std::vector<std::vector<double>> edge_weights;  // zero wherever edges is 0

  std::size_t size() const { return nodes.size(); }
  bool has_edge(std::size_t a, std::size_t b) const { return edges[a][b] != 0; }
  double total_edge_weight() const;
};

// Rescales saliencies so the largest bounding-box volume maps to 1.
// Order is preserved.
std::vector<ObjectInstance> normalize_saliency(const std::vector<ObjectInstance>& objects);

// Builds the scene graph from normalized objects. Objects below
// `saliency_floor` are dropped; a pair (a, b) is connected when the smaller
// of the two mean dimensions strictly exceeds the centroid distance.
SaliencyGraph360 build_saliency_graph(int scene_id, const std::vector<ObjectInstance>& objects,
                                      double saliency_floor = 0.0);

// Structural comparison used by the closed-loop checks: node count, labels,
// saliencies/orientations within `tol`, identical edge sets, weights within
// `tol`.
bool graphs_equal(const SaliencyGraph360& a, const SaliencyGraph360& b, double tol);

// --- observation & graph files ---------------------------------------------
//
// Observation file: one `label x y z ex ey ez` record per object (6-decimal
// fixed point, metres); `#` lines are comments.
//
// Graph dump: header `SALGRAPH v1 <scene_id> <n>`, then n node lines
// `idx label saliency azimuth polar radial`, then one `a b weight` line per
// edge.

std::vector<ObjectInstance> read_observation_file(const std::string& path);
void write_observation_file(const std::string& path, const std::vector<ObjectInstance>& objects,
                            const std::string& comment = "");

void write_saliency_graph(std::ostream& out, const SaliencyGraph360& graph);
void write_saliency_graph_file(const std::string& path, const SaliencyGraph360& graph);

// Reads a graph dump. Nodes get their centroid reconstructed from the stored
// spherical coordinates; extents are not part of the dump and load as zero.
SaliencyGraph360 read_saliency_graph(std::istream& in);
SaliencyGraph360 read_saliency_graph_file(const std::string& path);

}  // namespace salgraph
