#pragma once

#include <stdexcept>
#include <string>

namespace salgraph {

// Domain failure conditions. The CLI maps these to exit code 2;
// usage and I/O problems stay plain std::runtime_error (exit code 1).
enum class Errc {
  empty_scene,
  degenerate_scene,
  degenerate_centroid,
  empty_graph,
  disconnected_map,
  unsupported_version,
  corrupt_map,
  no_candidates,
  insufficient_correspondences,
  degenerate_direction,
  zero_weight,
  underdetermined_rotation,
  invalid_hop,
  infeasible_world,
  invalid_pose,
  unknown_experiment,
};

const char* errc_name(Errc code);

class DomainError : public std::runtime_error {
 public:
  DomainError(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc code) {
  switch (code) {
  case Errc::empty_scene: return "EmptyScene";
  case Errc::degenerate_scene: return "DegenerateScene";
  case Errc::degenerate_centroid: return "DegenerateCentroid";
  case Errc::empty_graph: return "EmptyGraph";
  case Errc::disconnected_map: return "DisconnectedMap";
  case Errc::unsupported_version: return "UnsupportedVersion";
  case Errc::corrupt_map: return "CorruptMap";
  case Errc::no_candidates: return "NoCandidates";
  case Errc::insufficient_correspondences: return "InsufficientCorrespondences";
  case Errc::degenerate_direction: return "DegenerateDirection";
  case Errc::zero_weight: return "ZeroWeight";
  case Errc::underdetermined_rotation: return "UnderdeterminedRotation";
  case Errc::invalid_hop: return "InvalidHop";
  case Errc::infeasible_world: return "InfeasibleWorld";
  case Errc::invalid_pose: return "InvalidPose";
  case Errc::unknown_experiment: return "UnknownExperiment";
  }
  return "DomainError";
}

}  // namespace salgraph
