#pragma once

// Brute-force reference implementations the test suites check against.
// Everything here is deliberately independent of the library's algorithms:
// exhaustive enumeration and a heap-based single-source shortest path.

#include <limits>
#include <queue>
#include <string>
#include <vector>

#include "salgraph/localization.hpp"
#include "salgraph/rng.hpp"
#include "salgraph/topo_map.hpp"

namespace salgraph::testing {

// Best achievable alignment score over every label-respecting partial
// injection with per-pair similarity >= floor. Exponential; keep inputs at
// six nodes per side or fewer.
inline double optimal_alignment_score(const SaliencyGraph360& query,
                                      const SaliencyGraph360& candidate, double floor,
                                      double saliency_weight = 0.5) {
  const auto qd = node_descriptors(query);
  const auto cd = node_descriptors(candidate);
  std::vector<std::uint8_t> used(cd.size(), 0);

  double best = 0.0;
  auto recurse = [&](auto&& self, std::size_t qi, double acc) -> void {
    if (qi == qd.size()) {
      best = std::max(best, acc);
      return;
    }
    self(self, qi + 1, acc);  // leave this query node unmatched
    for (std::size_t ci = 0; ci < cd.size(); ++ci) {
      if (used[ci] || qd[qi].label != cd[ci].label) continue;
      const double psi = node_similarity(qd[qi], cd[ci], saliency_weight);
      if (psi < floor) continue;
      used[ci] = 1;
      self(self, qi + 1, acc + psi);
      used[ci] = 0;
    }
  };
  recurse(recurse, 0, 0.0);
  return best;
}

// Greedy alignment score, for direct comparison with the optimum.
inline double greedy_alignment_score(const SaliencyGraph360& query,
                                     const SaliencyGraph360& candidate, double floor,
                                     double saliency_weight = 0.5) {
  const Alignment alignment = align_nodes(query, candidate, floor, saliency_weight);
  double total = 0.0;
  for (const auto& [qa, cb] : alignment.pairs) {
    total += alignment.score_matrix[qa][cb];
  }
  return total;
}

// Single-source shortest path over a map's adjacency, binary-heap Dijkstra.
inline std::vector<double> dijkstra(const TopoMap& map, std::size_t source) {
  const std::size_t n = map.nodes.size();
  std::vector<double> dist(n, std::numeric_limits<double>::infinity());
  std::vector<std::uint8_t> done(n, 0);
  using Entry = std::pair<double, std::size_t>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (done[u]) continue;
    done[u] = 1;
    for (std::size_t v = 0; v < n; ++v) {
      if (!map.adjacency[u][v] || done[v]) continue;
      const double nd = d + map.edge_length[u][v];
      if (nd < dist[v]) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  return dist;
}

// Random connected graph wrapped in a TopoMap shell: spanning tree plus
// extras, integer edge lengths so path sums are exact in doubles.
inline TopoMap random_weighted_map(std::uint64_t seed, int n_nodes, double extra_edge_rate) {
  Rng rng(seed);
  TopoMap map;
  map.nodes.resize(n_nodes);
  for (int i = 0; i < n_nodes; ++i) {
    map.nodes[i].id = i;
    map.nodes[i].kind = NodeKind::kTransition;
  }
  map.adjacency.assign(n_nodes, std::vector<std::uint8_t>(n_nodes, 0));
  map.edge_length.assign(n_nodes, std::vector<double>(n_nodes, 0.0));
  map.rel_azimuth.assign(n_nodes, std::vector<double>(n_nodes, 0.0));
  auto connect = [&](int a, int b) {
    const double w = static_cast<double>(rng.uniform_int(1, 1000));
    map.adjacency[a][b] = map.adjacency[b][a] = 1;
    map.edge_length[a][b] = map.edge_length[b][a] = w;
  };
  for (int i = 1; i < n_nodes; ++i) {
    connect(i, static_cast<int>(rng.uniform_int(0, i - 1)));
  }
  for (int a = 0; a < n_nodes; ++a) {
    for (int b = a + 1; b < n_nodes; ++b) {
      if (!map.adjacency[a][b] && rng.uniform01() < extra_edge_rate) connect(a, b);
    }
  }
  return map;
}

}  // namespace salgraph::testing
