#include "salgraph/localization.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace salgraph {

NodeDescriptor node_descriptor(const SaliencyGraph360& graph, std::size_t index) {
  const std::size_t n = graph.nodes.size();
  NodeDescriptor d;
  d.label = graph.nodes[index].object.label;
  d.saliency = graph.nodes[index].object.saliency;

  std::vector<std::size_t> neighbors;
  double weight_sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    if (graph.edges[index][j]) {
      neighbors.push_back(j);
      weight_sum += graph.edge_weights[index][j];
    }
  }
  const std::size_t degree = neighbors.size();
  d.structure[0] = n > 1 ? static_cast<double>(degree) / static_cast<double>(n - 1) : 0.0;

  if (degree >= 2) {
    std::size_t closed = 0;
    for (std::size_t a = 0; a < degree; ++a) {
      for (std::size_t b = a + 1; b < degree; ++b) {
        if (graph.edges[neighbors[a]][neighbors[b]]) ++closed;
      }
    }
    d.structure[1] =
        2.0 * static_cast<double>(closed) / (static_cast<double>(degree) * (degree - 1));
  }
  d.structure[2] = degree > 0 ? weight_sum / static_cast<double>(degree) : 0.0;

  if (n > 1) {
    std::size_t below = 0;
    for (std::size_t j = 0; j < n; ++j) {
      if (graph.nodes[j].object.saliency < d.saliency) ++below;
    }
    d.structure[3] = static_cast<double>(below) / static_cast<double>(n - 1);
  } else {
    d.structure[3] = 1.0;
  }
  return d;
}

std::vector<NodeDescriptor> node_descriptors(const SaliencyGraph360& graph) {
  std::vector<NodeDescriptor> out;
  out.reserve(graph.nodes.size());
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    out.push_back(node_descriptor(graph, i));
  }
  return out;
}

double jaccard(const SaliencyGraph360& g1, const SaliencyGraph360& g2, bool multiset) {
  if (g1.nodes.empty() || g2.nodes.empty()) {
    throw std::invalid_argument("jaccard requires nonempty graphs");
  }
  if (!multiset) {
    std::set<std::string> l1, l2;
    for (const auto& node : g1.nodes) l1.insert(node.object.label);
    for (const auto& node : g2.nodes) l2.insert(node.object.label);
    std::size_t inter = 0;
    for (const auto& label : l1) inter += l2.count(label);
    const std::size_t uni = l1.size() + l2.size() - inter;
    return static_cast<double>(inter) / static_cast<double>(uni);
  }
  std::map<std::string, std::size_t> c1, c2;
  for (const auto& node : g1.nodes) ++c1[node.object.label];
  for (const auto& node : g2.nodes) ++c2[node.object.label];
  std::size_t inter = 0, uni = 0;
  for (const auto& [label, count] : c1) {
    const auto it = c2.find(label);
    const std::size_t other = it == c2.end() ? 0 : it->second;
    inter += std::min(count, other);
    uni += std::max(count, other);
  }
  for (const auto& [label, count] : c2) {
    if (!c1.count(label)) uni += count;
  }
  return static_cast<double>(inter) / static_cast<double>(uni);
}

double node_similarity(const NodeDescriptor& a, const NodeDescriptor& b, double saliency_weight) {
  if (a.label != b.label) return 0.0;
  const double saliency_term = 1.0 - std::fabs(a.saliency - b.saliency);
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t k = 0; k < a.structure.size(); ++k) {
    dot += a.structure[k] * b.structure[k];
    na += a.structure[k] * a.structure[k];
    nb += b.structure[k] * b.structure[k];
  }
  double cosine;
  if (na == 0.0 && nb == 0.0) {
    cosine = 1.0;  // two structureless nodes agree
  } else if (na == 0.0 || nb == 0.0) {
    cosine = 0.0;
  } else {
    cosine = dot / (std::sqrt(na) * std::sqrt(nb));
  }
  const double psi = saliency_weight * saliency_term + (1.0 - saliency_weight) * cosine;
  return std::clamp(psi, 0.0, 1.0);
}

Alignment align_nodes(const SaliencyGraph360& query, const SaliencyGraph360& candidate,
                      double floor, double saliency_weight) {
  const std::vector<NodeDescriptor> qd = node_descriptors(query);
  const std::vector<NodeDescriptor> cd = node_descriptors(candidate);
  Alignment alignment;
  alignment.score_matrix.assign(qd.size(), std::vector<double>(cd.size(), 0.0));
  for (std::size_t a = 0; a < qd.size(); ++a) {
    for (std::size_t b = 0; b < cd.size(); ++b) {
      alignment.score_matrix[a][b] = node_similarity(qd[a], cd[b], saliency_weight);
    }
  }

  std::vector<std::uint8_t> query_used(qd.size(), 0), cand_used(cd.size(), 0);
  while (true) {
    double best = -1.0;
    std::size_t best_a = 0, best_b = 0;
    for (std::size_t a = 0; a < qd.size(); ++a) {
      if (query_used[a]) continue;
      for (std::size_t b = 0; b < cd.size(); ++b) {
        if (cand_used[b] || qd[a].label != cd[b].label) continue;
        if (alignment.score_matrix[a][b] > best) {
          best = alignment.score_matrix[a][b];
          best_a = a;
          best_b = b;
        }
      }
    }
    if (best < floor) break;
    query_used[best_a] = 1;
    cand_used[best_b] = 1;
    alignment.pairs.emplace_back(best_a, best_b);
  }
  return alignment;
}

double triplet_score(const SaliencyGraph360& query, const SaliencyGraph360& candidate,
                     const Alignment& alignment) {
  // Candidate index -> matched query index.
  std::vector<int> match_of(candidate.nodes.size(), -1);
  for (const auto& [qa, cb] : alignment.pairs) {
    match_of[cb] = static_cast<int>(qa);
  }
  double score = 0.0;
  for (std::size_t a = 0; a < candidate.nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < candidate.nodes.size(); ++b) {
      if (!candidate.edges[a][b]) continue;
      if (match_of[a] < 0 || match_of[b] < 0) continue;
      if (!query.edges[match_of[a]][match_of[b]]) continue;
      score += candidate.edge_weights[a][b];
    }
  }
  return score;
}

std::vector<int> select_candidates(const SaliencyGraph360& query,
                                   const std::vector<const SaliencyGraph360*>& map_graphs,
                                   const MatchConfig& config) {
  if (map_graphs.empty()) {
    throw std::invalid_argument("select_candidates requires stored graphs");
  }
  std::vector<std::pair<double, int>> scored;  // (jaccard, scene id)
  double best = 0.0;
  for (const SaliencyGraph360* graph : map_graphs) {
    const double j = jaccard(query, *graph, config.jaccard_multiset);
    scored.emplace_back(j, graph->scene_id);
    best = std::max(best, j);
  }
  if (best == 0.0) {
    throw DomainError(Errc::no_candidates, "query shares no labels with any stored scene");
  }
  const double threshold = config.candidate_factor * best;
  std::vector<std::pair<double, int>> kept;
  for (const auto& entry : scored) {
    if (entry.first >= threshold) kept.push_back(entry);
  }
  std::sort(kept.begin(), kept.end(), [](const auto& lhs, const auto& rhs) {
    if (lhs.first != rhs.first) return lhs.first > rhs.first;
    return lhs.second < rhs.second;
  });
  std::vector<int> ids;
  ids.reserve(kept.size());
  for (const auto& entry : kept) ids.push_back(entry.second);
  return ids;
}

LocalizationResult localize(const SaliencyGraph360& query,
                            const std::vector<const SaliencyGraph360*>& map_graphs,
                            const MatchConfig& config) {
  const std::vector<int> candidate_ids = select_candidates(query, map_graphs, config);

  LocalizationResult result;
  result.candidates_considered = candidate_ids.size();
  bool have_best = false;
  for (const int id : candidate_ids) {
    const SaliencyGraph360* candidate = nullptr;
    for (const SaliencyGraph360* graph : map_graphs) {
      if (graph->scene_id == id) {
        candidate = graph;
        break;
      }
    }
    Alignment alignment = align_nodes(query, *candidate, config.alignment_floor,
                                      config.saliency_weight);
    const double score = triplet_score(query, *candidate, alignment);
    const bool wins = !have_best || score > result.triplet_score ||
                      (score == result.triplet_score && id < result.matched_scene_id);
    if (wins) {
      result.matched_scene_id = id;
      result.triplet_score = score;
      result.alignment = std::move(alignment);
      have_best = true;
    }
  }
  return result;
}

LocalizationResult localize(const SaliencyGraph360& query, const TopoMap& map,
                            const MatchConfig& config) {
  std::vector<const SaliencyGraph360*> graphs;
  for (const auto& node : map.nodes) {
    if (node.kind == NodeKind::kScene && node.graph.has_value()) {
      graphs.push_back(&*node.graph);
    }
  }
  if (graphs.empty()) {
    throw std::invalid_argument("map has no scene graphs to match against");
  }
  return localize(query, graphs, config);
}

}  // namespace salgraph
