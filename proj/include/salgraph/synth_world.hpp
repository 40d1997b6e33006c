#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "salgraph/grid.hpp"
#include "salgraph/scene_graph.hpp"
#include "salgraph/topo_map.hpp"

namespace salgraph {

// Per-room-type object vocabulary: anchors always appear, fillers are
// sampled. Some types deliberately share most fillers so partial views of
// different rooms stay confusable.
struct RoomTypeProfile {
  std::string name;
  std::vector<std::string> anchors;
  std::vector<std::string> fillers;
};

struct WorldSpec {
  std::uint64_t seed = 1;
  int rooms = 12;             // total scene count, corridor included
  double cell_size = 0.5;     // metres
  int room_cells = 8;         // interior side length of a room, in cells
  int corridor_cells = 3;     // corridor breadth, in cells
  int max_width = 640;        // grid capacity
  int max_height = 96;
  int objects_min = 6;
  int objects_max = 10;
  double saliency_floor = 0.0;
  std::vector<RoomTypeProfile> room_types;  // defaults installed when empty
};

std::vector<RoomTypeProfile> default_room_profiles();
WorldSpec default_world_spec(int rooms, std::uint64_t seed);

struct SceneInfo {
  int id = -1;       // scene/map node id
  int region = 0;    // grid region id
  std::string room_type;
  Vec2 node_position;  // metres, a cell center
};

// A placed object in the world frame, tagged with its containing region.
struct WorldObject {
  int region = 0;
  ObjectInstance object;
};

struct SynthWorld {
  WorldSpec spec;
  FloorGrid grid;
  std::vector<SceneInfo> scenes;
  std::vector<WorldObject> objects;

  const SceneInfo* scene_for_region(int region) const;
  // Scene id of the region containing p, or -1 outside any room.
  int scene_at(const Vec2& p) const;
};

// Deterministic building generator: rectangular rooms in one or two rows
// around a central corridor, one doorway per room, seeded object layouts.
// Throws InfeasibleWorld when the requested rooms exceed the grid capacity.
SynthWorld generate_world(const WorldSpec& spec);

struct Pose2 {
  Vec2 position;
  double heading = 0.0;  // radians, from +X
};

// Symbolic panorama: objects of the viewpoint's room expressed in the viewer
// frame (translated by -position, rotated by -heading), restricted to the
// angular window [-fov/2, +fov/2].
struct Observation {
  Pose2 pose;
  double fov = kTwoPi;
  std::vector<ObjectInstance> objects;
};

Observation render_observation(const SynthWorld& world, const Pose2& pose, double fov = kTwoPi);

enum class PerturbKind { kSpatial, kOrientation, kObjectDrop };

// Seeded measurement corruption: Gaussian centroid offsets, a global heading
// error, or uniform object dropout.
Observation perturb(const Observation& obs, PerturbKind kind, double magnitude,
                    std::uint64_t seed);

// Observation -> query graph pipeline (saliency normalization included).
SaliencyGraph360 query_graph(const Observation& obs, double saliency_floor = 0.0,
                             int scene_id = -1);

// Map construction: scene nodes at the generator's room reference points
// carrying graphs rendered there, transition nodes from region boundaries,
// visibility adjacency over the grid.
TopoMap build_topo_map(const SynthWorld& world);

// --- world directory --------------------------------------------------------
//
// A world directory holds `world.grid`, one `scene_<id>.obs` observation per
// scene (objects in the scene node frame), and a `world.manifest` listing the
// files, the scene table, and the world-frame object ground truth.

void write_world(const SynthWorld& world, const std::string& dir);
SynthWorld load_world(const std::string& dir);

// Rebuilds the map from a world directory the way the CLI does: scene graphs
// come from the stored observation files.
TopoMap build_topo_map_from_dir(const std::string& dir);

}  // namespace salgraph
