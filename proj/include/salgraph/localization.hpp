#pragma once

#include <array>
#include <string>
#include <vector>

#include "salgraph/scene_graph.hpp"
#include "salgraph/topo_map.hpp"

namespace salgraph {

// Tuning knobs for graph matching. Defaults follow the module contracts.
struct MatchConfig {
  double alignment_floor = 0.25;     // minimum node similarity kept by align_nodes
  double saliency_weight = 0.5;      // vs. structure cosine in node similarity
  double candidate_factor = 0.6;     // Jaccard gate relative to the best score
  bool jaccard_multiset = false;     // count duplicate labels instead of sets
};

// Deterministic per-node descriptor replacing a learned embedding:
// [normalized degree, local clustering coefficient, mean incident edge
// weight, saliency rank percentile], each in [0, 1].
struct NodeDescriptor {
  std::string label;
  double saliency = 0.0;
  std::array<double, 4> structure{};
};

NodeDescriptor node_descriptor(const SaliencyGraph360& graph, std::size_t index);
std::vector<NodeDescriptor> node_descriptors(const SaliencyGraph360& graph);

// Label-set overlap |L1 n L2| / |L1 u L2|; the multiset variant uses
// min/max label counts instead.
double jaccard(const SaliencyGraph360& g1, const SaliencyGraph360& g2, bool multiset = false);

// Similarity of two node descriptors; zero across labels, otherwise a
// convex mix of saliency agreement and structure cosine, clamped to [0, 1].
double node_similarity(const NodeDescriptor& a, const NodeDescriptor& b,
                       double saliency_weight = 0.5);

// One-to-one node correspondences between a query and a candidate graph.
struct Alignment {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (query, candidate)
  std::vector<std::vector<double>> score_matrix;           // query x candidate similarities
};

// Greedy best-pair-first assignment over label-compatible pairs with
// similarity >= floor; ties prefer the lowest query index, then the lowest
// candidate index.
Alignment align_nodes(const SaliencyGraph360& query, const SaliencyGraph360& candidate,
                      double floor, double saliency_weight = 0.5);

// Sum of candidate edge weights over matched triplets: candidate edges whose
// both endpoints are matched and whose counterparts are connected in the
// query. Each unordered edge counts once.
double triplet_score(const SaliencyGraph360& query, const SaliencyGraph360& candidate,
                     const Alignment& alignment);

// Scene ids whose Jaccard score reaches candidate_factor times the best,
// in descending score order (ties by ascending scene id). Throws
// NoCandidates when every score is zero.
std::vector<int> select_candidates(const SaliencyGraph360& query,
                                   const std::vector<const SaliencyGraph360*>& map_graphs,
                                   const MatchConfig& config = {});

struct LocalizationResult {
  int matched_scene_id = -1;
  double triplet_score = 0.0;
  Alignment alignment;
  std::size_t candidates_considered = 0;
};

// Full matching pipeline over a set of stored scene graphs.
LocalizationResult localize(const SaliencyGraph360& query,
                            const std::vector<const SaliencyGraph360*>& map_graphs,
                            const MatchConfig& config = {});

// Convenience overload over the scene nodes of a topological map.
LocalizationResult localize(const SaliencyGraph360& query, const TopoMap& map,
                            const MatchConfig& config = {});

}  // namespace salgraph
