#include "salgraph/scene_graph.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "salgraph/io_util.hpp"

namespace salgraph {

double SaliencyGraph360::total_edge_weight() const {
  double total = 0.0;
  for (std::size_t a = 0; a < nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < nodes.size(); ++b) {
      total += edge_weights[a][b];
    }
  }
  return total;
}

std::vector<ObjectInstance> normalize_saliency(const std::vector<ObjectInstance>& objects) {
  if (objects.empty()) {
    throw DomainError(Errc::empty_scene, "no objects to normalize");
  }
  double max_volume = 0.0;
  for (const auto& obj : objects) {
    if (obj.extents.x < 0.0 || obj.extents.y < 0.0 || obj.extents.z < 0.0) {
      throw std::invalid_argument("object extents must be nonnegative");
    }
    max_volume = std::max(max_volume, obj.volume());
  }
  if (max_volume == 0.0) {
    throw DomainError(Errc::degenerate_scene, "all object volumes are zero");
  }
  std::vector<ObjectInstance> out = objects;
  for (auto& obj : out) {
    obj.saliency = obj.volume() / max_volume;
  }
  return out;
}

SaliencyGraph360 build_saliency_graph(int scene_id, const std::vector<ObjectInstance>& objects,
                                      double saliency_floor) {
  if (objects.empty()) {
    throw DomainError(Errc::empty_scene, "no objects for graph construction");
  }
  SaliencyGraph360 graph;
  graph.scene_id = scene_id;
  for (const auto& obj : objects) {
    if (obj.saliency < 0.0 || obj.saliency > 1.0) {
      throw std::invalid_argument("object saliency must be normalized into [0, 1]");
    }
    if (obj.saliency < saliency_floor) continue;
    SalientNode node;
    node.object = obj;
    node.mean_dimension = (obj.extents.x + obj.extents.y + obj.extents.z) / 3.0;
    const Spherical sph = spherical_of(obj.centroid);
    node.azimuth = sph.azimuth;
    node.polar = sph.polar;
    node.radial_distance = sph.radial;
    graph.nodes.push_back(std::move(node));
  }
  if (graph.nodes.empty()) {
    throw DomainError(Errc::empty_graph, "all objects fall below the saliency floor");
  }

  const std::size_t n = graph.nodes.size();
  graph.edges.assign(n, std::vector<std::uint8_t>(n, 0));
  graph.edge_weights.assign(n, std::vector<double>(n, 0.0));
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double d = distance(graph.nodes[a].object.centroid, graph.nodes[b].object.centroid);
      const double min_dim = std::min(graph.nodes[a].mean_dimension, graph.nodes[b].mean_dimension);
      if (min_dim > d) {
        const double w =
            std::sqrt(graph.nodes[a].object.saliency * graph.nodes[b].object.saliency);
        graph.edges[a][b] = graph.edges[b][a] = 1;
        graph.edge_weights[a][b] = graph.edge_weights[b][a] = w;
      }
    }
  }
  return graph;
}

bool graphs_equal(const SaliencyGraph360& a, const SaliencyGraph360& b, double tol) {
  if (a.nodes.size() != b.nodes.size()) return false;
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    const SalientNode& na = a.nodes[i];
    const SalientNode& nb = b.nodes[i];
    if (na.object.label != nb.object.label) return false;
    if (std::fabs(na.object.saliency - nb.object.saliency) > tol) return false;
    if (angle_abs_diff(na.azimuth, nb.azimuth) > tol) return false;
    if (std::fabs(na.polar - nb.polar) > tol) return false;
    if (std::fabs(na.radial_distance - nb.radial_distance) > tol) return false;
  }
  for (std::size_t i = 0; i < a.nodes.size(); ++i) {
    for (std::size_t j = 0; j < a.nodes.size(); ++j) {
      if (a.edges[i][j] != b.edges[i][j]) return false;
      if (std::fabs(a.edge_weights[i][j] - b.edge_weights[i][j]) > tol) return false;
    }
  }
  return true;
}

std::vector<ObjectInstance> read_observation_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open observation file: " + path);
  }
  std::vector<ObjectInstance> objects;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    ObjectInstance obj;
    if (!(row >> obj.label >> obj.centroid.x >> obj.centroid.y >> obj.centroid.z >>
          obj.extents.x >> obj.extents.y >> obj.extents.z)) {
      throw std::runtime_error("malformed observation record: " + line);
    }
    objects.push_back(std::move(obj));
  }
  return objects;
}

void write_observation_file(const std::string& path, const std::vector<ObjectInstance>& objects,
                            const std::string& comment) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write observation file: " + path);
  }
  if (!comment.empty()) {
    out << "# " << comment << "\n";
  }
  for (const auto& obj : objects) {
    out << obj.label << ' ' << fixed6(obj.centroid.x) << ' ' << fixed6(obj.centroid.y) << ' '
        << fixed6(obj.centroid.z) << ' ' << fixed6(obj.extents.x) << ' ' << fixed6(obj.extents.y)
        << ' ' << fixed6(obj.extents.z) << "\n";
  }
}

void write_saliency_graph(std::ostream& out, const SaliencyGraph360& graph) {
  out << "SALGRAPH v1 " << graph.scene_id << ' ' << graph.nodes.size() << "\n";
  for (std::size_t i = 0; i < graph.nodes.size(); ++i) {
    const SalientNode& node = graph.nodes[i];
    out << i << ' ' << node.object.label << ' ' << full17(node.object.saliency) << ' '
        << full17(node.azimuth) << ' ' << full17(node.polar) << ' '
        << full17(node.radial_distance) << "\n";
  }
  for (std::size_t a = 0; a < graph.nodes.size(); ++a) {
    for (std::size_t b = a + 1; b < graph.nodes.size(); ++b) {
      if (graph.edges[a][b]) {
        out << a << ' ' << b << ' ' << full17(graph.edge_weights[a][b]) << "\n";
      }
    }
  }
}

void write_saliency_graph_file(const std::string& path, const SaliencyGraph360& graph) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write graph file: " + path);
  }
  write_saliency_graph(out, graph);
}

SaliencyGraph360 read_saliency_graph(std::istream& in) {
  std::string magic, version;
  int scene_id = -1;
  std::size_t n = 0;
  if (!(in >> magic >> version >> scene_id >> n) || magic != "SALGRAPH") {
    throw std::runtime_error("not a SALGRAPH file");
  }
  if (version != "v1") {
    throw DomainError(Errc::unsupported_version, "graph file version " + version);
  }
  if (n == 0) {
    throw DomainError(Errc::empty_graph, "graph file declares zero nodes");
  }
  SaliencyGraph360 graph;
  graph.scene_id = scene_id;
  graph.nodes.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = 0;
    SalientNode node;
    if (!(in >> idx >> node.object.label >> node.object.saliency >> node.azimuth >> node.polar >>
          node.radial_distance) ||
        idx != i) {
      throw std::runtime_error("malformed SALGRAPH node line");
    }
    Spherical sph{node.azimuth, node.polar, node.radial_distance};
    node.object.centroid = cartesian_of(sph);
    graph.nodes[i] = std::move(node);
  }
  graph.edges.assign(n, std::vector<std::uint8_t>(n, 0));
  graph.edge_weights.assign(n, std::vector<double>(n, 0.0));
  std::size_t a = 0, b = 0;
  double w = 0.0;
  while (in >> a >> b >> w) {
    if (a >= n || b >= n || a == b) {
      throw std::runtime_error("malformed SALGRAPH edge line");
    }
    graph.edges[a][b] = graph.edges[b][a] = 1;
    graph.edge_weights[a][b] = graph.edge_weights[b][a] = w;
  }
  return graph;
}

SaliencyGraph360 read_saliency_graph_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("cannot open graph file: " + path);
  }
  return read_saliency_graph(in);
}

}  // namespace salgraph
