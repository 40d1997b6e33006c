#include "salgraph/synth_world.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "salgraph/io_util.hpp"
#include "salgraph/rng.hpp"

namespace fs = std::filesystem;

namespace salgraph {

namespace {

struct LabelDims {
  const char* label;
  double ex, ey, ez;
};

// Base bounding boxes per label, metres. Anchors are bulky on purpose so
// saliency concentrates on scene-defining objects.
const LabelDims kLabelDims[] = {
    {"bed", 2.0, 1.6, 0.6},        {"wardrobe", 1.2, 0.6, 2.0},
    {"sofa", 2.0, 0.9, 0.8},       {"tv_stand", 1.6, 0.45, 0.5},
    {"kitchen_counter", 2.4, 0.65, 0.9}, {"fridge", 0.9, 0.8, 1.8},
    {"oven", 0.6, 0.6, 0.9},       {"sink", 0.6, 0.5, 0.3},
    {"desk", 1.4, 0.7, 0.75},      {"bookshelf", 1.0, 0.35, 1.9},
    {"conference_table", 2.8, 1.2, 0.75}, {"whiteboard", 1.8, 0.1, 1.2},
    {"bathtub", 1.7, 0.8, 0.6},    {"vanity", 1.2, 0.55, 0.85},
    {"dining_table", 1.8, 1.0, 0.75}, {"sideboard", 1.6, 0.5, 0.9},
    {"chair", 0.5, 0.5, 0.9},      {"table", 1.2, 0.8, 0.75},
    {"lamp", 0.35, 0.35, 1.5},     {"nightstand", 0.5, 0.45, 0.55},
    {"rug", 1.6, 1.1, 0.02},       {"curtain", 1.5, 0.1, 2.2},
    {"mirror", 0.9, 0.08, 1.4},    {"cabinet", 0.9, 0.5, 1.4},
    {"shelf", 0.9, 0.3, 1.6},      {"monitor", 0.6, 0.2, 0.45},
    {"plant", 0.45, 0.45, 1.3},    {"screen", 1.9, 0.15, 1.3},
    {"towel_rack", 0.7, 0.15, 1.0}, {"coffee_table", 1.1, 0.6, 0.45},
    {"tv", 1.3, 0.1, 0.75},        {"bench", 1.5, 0.45, 0.5},
    {"coat_rack", 0.4, 0.4, 1.8},  {"sign", 0.5, 0.08, 0.6},
    {"piano", 1.5, 0.7, 1.1},      {"aquarium", 1.0, 0.45, 0.7},
    {"fireplace", 1.3, 0.5, 1.1},  {"ladder", 0.5, 0.4, 1.9},
    {"treadmill", 1.7, 0.8, 1.3},  {"globe", 0.45, 0.45, 0.9},
    {"easel", 0.7, 0.6, 1.6},      {"safe", 0.6, 0.6, 0.8},
    {"fan", 0.5, 0.5, 1.2},        {"statue", 0.5, 0.5, 1.6},
    {"clock", 0.4, 0.25, 1.7},     {"vase", 0.35, 0.35, 0.8},
    {"guitar", 1.0, 0.4, 0.4},     {"drum_kit", 1.2, 1.0, 1.0},
    {"telescope", 0.6, 0.6, 1.5},  {"heater", 0.7, 0.3, 0.9},
    {"printer", 0.6, 0.55, 0.5},   {"suitcase", 0.75, 0.3, 0.55},
    {"mannequin", 0.5, 0.4, 1.7},  {"birdcage", 0.5, 0.5, 1.1},
};

// Idiosyncratic objects sprinkled one or two per room; they separate rooms
// that otherwise share a type's whole vocabulary.
const char* kRareLabels[] = {
    "piano",     "aquarium",  "fireplace", "ladder",   "treadmill", "globe",
    "easel",     "safe",      "fan",       "statue",   "clock",     "vase",
    "guitar",    "drum_kit",  "telescope", "heater",   "printer",   "suitcase",
    "mannequin", "birdcage",
};

Vec3 base_extents(const std::string& label) {
  for (const auto& entry : kLabelDims) {
    if (label == entry.label) return {entry.ex, entry.ey, entry.ez};
  }
  return {0.6, 0.6, 0.6};
}

struct RoomRect {
  int x0 = 0, y0 = 0, w = 0, h = 0;  // interior cells
};

}  // namespace

std::vector<RoomTypeProfile> default_room_profiles() {
  // Office and meeting intentionally share most of their vocabulary; the
  // wide filler pools keep two rooms of the same type from collapsing onto
  // almost identical label sets.
  return {
      {"bedroom",
       {"bed", "wardrobe"},
       {"lamp", "nightstand", "chair", "rug", "curtain", "mirror", "bench", "shelf", "plant",
        "coat_rack"}},
      {"kitchen",
       {"kitchen_counter", "fridge"},
       {"oven", "sink", "table", "chair", "cabinet", "shelf", "plant", "sign", "rug", "bench"}},
      {"office",
       {"desk", "bookshelf"},
       {"chair", "table", "monitor", "lamp", "cabinet", "plant", "shelf", "screen", "sign",
        "rug"}},
      {"meeting",
       {"conference_table", "whiteboard"},
       {"chair", "table", "monitor", "plant", "cabinet", "screen", "sign", "bench", "curtain",
        "lamp"}},
      {"bathroom",
       {"bathtub", "vanity"},
       {"sink", "mirror", "towel_rack", "cabinet", "rug", "shelf", "bench", "plant", "curtain",
        "sign"}},
      {"livingroom",
       {"sofa", "tv_stand"},
       {"tv", "coffee_table", "rug", "lamp", "plant", "curtain", "mirror", "bench", "shelf",
        "chair"}},
      {"dining",
       {"dining_table", "sideboard"},
       {"chair", "rug", "lamp", "curtain", "shelf", "cabinet", "plant", "bench", "mirror",
        "sign"}},
  };
}

WorldSpec default_world_spec(int rooms, std::uint64_t seed) {
  WorldSpec spec;
  spec.rooms = rooms;
  spec.seed = seed;
  spec.room_types = default_room_profiles();
  return spec;
}

const SceneInfo* SynthWorld::scene_for_region(int region) const {
  for (const auto& scene : scenes) {
    if (scene.region == region) return &scene;
  }
  return nullptr;
}

int SynthWorld::scene_at(const Vec2& p) const {
  const int region = grid.region_at(p);
  const SceneInfo* scene = scene_for_region(region);
  return scene != nullptr ? scene->id : -1;
}

namespace {

void carve_room(FloorGrid& grid, const RoomRect& rect, int region) {
  for (int y = rect.y0; y < rect.y0 + rect.h; ++y) {
    for (int x = rect.x0; x < rect.x0 + rect.w; ++x) {
      grid.occupancy[y][x] = 0;
      grid.region[y][x] = region;
    }
  }
}

void place_objects(SynthWorld& world, const RoomRect& rect, const SceneInfo& scene,
                   const RoomTypeProfile& profile,
                   const std::pair<std::string, std::string>& rare_pair) {
  const WorldSpec& spec = world.spec;
  Rng rng(derive_seed(spec.seed, 1000, static_cast<std::uint64_t>(scene.region)));
  int count = static_cast<int>(rng.uniform_int(spec.objects_min, spec.objects_max));

  std::vector<std::string> labels = profile.anchors;
  labels.push_back(rare_pair.first);
  labels.push_back(rare_pair.second);
  count = std::max(count, static_cast<int>(labels.size()));
  while (static_cast<int>(labels.size()) < count) {
    labels.push_back(profile.fillers[rng.uniform_int(0, profile.fillers.size() - 1)]);
  }

  // Candidate cells: room interior minus the node reference cell, shuffled.
  const int node_cx = world.grid.cell_x(scene.node_position.x);
  const int node_cy = world.grid.cell_y(scene.node_position.y);
  std::vector<std::pair<int, int>> cells;
  for (int y = rect.y0; y < rect.y0 + rect.h; ++y) {
    for (int x = rect.x0; x < rect.x0 + rect.w; ++x) {
      if (x == node_cx && y == node_cy) continue;
      cells.emplace_back(x, y);
    }
  }
  for (std::size_t i = cells.size(); i > 1; --i) {
    std::swap(cells[i - 1], cells[rng.uniform_int(0, i - 1)]);
  }
  count = std::min<int>(count, cells.size());

  const double cs = world.grid.cell_size;
  for (int k = 0; k < count; ++k) {
    const auto [cx, cy] = cells[k];
    const Vec2 center = world.grid.cell_center(cx, cy);
    WorldObject obj;
    obj.region = scene.region;
    obj.object.label = labels[k];
    const Vec3 base = base_extents(labels[k]);
    const double scale = rng.uniform(0.8, 1.25);
    obj.object.extents = {quantize6(base.x * scale), quantize6(base.y * scale),
                          quantize6(base.z * scale)};
    obj.object.centroid = {quantize6(center.x + rng.uniform(-0.35, 0.35) * cs),
                           quantize6(center.y + rng.uniform(-0.35, 0.35) * cs),
                           quantize6(obj.object.extents.z / 2.0)};
    world.objects.push_back(std::move(obj));
  }
}

}  // namespace

SynthWorld generate_world(const WorldSpec& spec_in) {
  WorldSpec spec = spec_in;
  if (spec.rooms < 2) {
    throw std::invalid_argument("a world needs at least two rooms");
  }
  if (spec.room_types.empty()) {
    spec.room_types = default_room_profiles();
  }
  const int rw = spec.room_cells;
  const int rh = spec.room_cells;

  SynthWorld world;
  world.spec = spec;
  FloorGrid& grid = world.grid;
  grid.cell_size = spec.cell_size;

  std::vector<RoomRect> rects;  // indexed by scene id

  if (spec.rooms <= 4) {
    // One row of rooms, doorways through the shared walls.
    grid.width = spec.rooms * (rw + 1) + 1;
    grid.height = rh + 2;
    if (grid.width > spec.max_width || grid.height > spec.max_height) {
      throw DomainError(Errc::infeasible_world, "rooms exceed the grid capacity");
    }
    grid.occupancy.assign(grid.height, std::vector<std::uint8_t>(grid.width, 1));
    grid.region.assign(grid.height, std::vector<int>(grid.width, 0));
    for (int i = 0; i < spec.rooms; ++i) {
      const RoomRect rect{1 + i * (rw + 1), 1, rw, rh};
      carve_room(grid, rect, i + 1);
      rects.push_back(rect);
      SceneInfo scene;
      scene.id = i;
      scene.region = i + 1;
      scene.node_position = grid.cell_center(rect.x0 + rw / 2, rect.y0 + rh / 2);
      world.scenes.push_back(scene);
    }
    // Doorways span three cells so the door stays passable from anywhere
    // inside the arrival radius of its transition node.
    const int door_row = 1 + rh / 2;
    for (int i = 0; i + 1 < spec.rooms; ++i) {
      const int wall_col = rects[i].x0 + rw;
      for (int dy = -1; dy <= 1; ++dy) {
        grid.occupancy[door_row + dy][wall_col] = 0;
        grid.region[door_row + dy][wall_col] = i + 1;  // doorway joins the left room
      }
    }
  } else {
    // Corridor spine with rooms above and below, one doorway per room.
    const int n_rooms = spec.rooms - 1;
    const int above = (n_rooms + 1) / 2;
    const int below = n_rooms - above;
    const int cols = above;
    const int ch = spec.corridor_cells;
    grid.width = cols * (rw + 1) + 1;
    grid.height = 2 * rh + ch + 4;
    if (grid.width > spec.max_width || grid.height > spec.max_height) {
      throw DomainError(Errc::infeasible_world, "rooms exceed the grid capacity");
    }
    grid.occupancy.assign(grid.height, std::vector<std::uint8_t>(grid.width, 1));
    grid.region.assign(grid.height, std::vector<int>(grid.width, 0));

    const int corridor_y0 = rh + 2;
    const RoomRect corridor{1, corridor_y0, grid.width - 2, ch};
    carve_room(grid, corridor, 1);
    SceneInfo corridor_scene;
    corridor_scene.id = 0;
    corridor_scene.region = 1;
    corridor_scene.node_position =
        grid.cell_center(grid.width / 2, corridor_y0 + ch / 2);
    world.scenes.push_back(corridor_scene);
    rects.push_back(corridor);

    for (int j = 0; j < above; ++j) {
      const RoomRect rect{1 + j * (rw + 1), 1, rw, rh};
      carve_room(grid, rect, 2 + j);
      rects.push_back(rect);
      SceneInfo scene;
      scene.id = 1 + j;
      scene.region = 2 + j;
      scene.node_position = grid.cell_center(rect.x0 + rw / 2, rect.y0 + rh / 2);
      world.scenes.push_back(scene);
      const int door_col = rect.x0 + rw / 2;
      for (int dx = -1; dx <= 1; ++dx) {
        grid.occupancy[rh + 1][door_col + dx] = 0;
        grid.region[rh + 1][door_col + dx] = scene.region;
      }
    }
    for (int j = 0; j < below; ++j) {
      const RoomRect rect{1 + j * (rw + 1), corridor_y0 + ch + 1, rw, rh};
      carve_room(grid, rect, 2 + above + j);
      rects.push_back(rect);
      SceneInfo scene;
      scene.id = 1 + above + j;
      scene.region = 2 + above + j;
      scene.node_position = grid.cell_center(rect.x0 + rw / 2, rect.y0 + rh / 2);
      world.scenes.push_back(scene);
      const int door_col = rect.x0 + rw / 2;
      for (int dx = -1; dx <= 1; ++dx) {
        grid.occupancy[corridor_y0 + ch][door_col + dx] = 0;
        grid.region[corridor_y0 + ch][door_col + dx] = scene.region;
      }
    }
  }

  validate_grid(grid);

  // Room types and object layouts, one seeded stream per region.
  const RoomTypeProfile hallway{
      "hallway",
      {"bench"},
      {"plant", "coat_rack", "shelf", "mirror", "sign", "rug", "lamp", "chair", "table",
       "curtain"}};

  // Every room receives a distinct pair of idiosyncratic labels, dealt from
  // a seeded shuffle of all pairs over the rare pool; pairs only repeat past
  // C(pool, 2) rooms.
  constexpr int kRarePoolSize = sizeof(kRareLabels) / sizeof(kRareLabels[0]);
  std::vector<std::pair<std::string, std::string>> rare_pairs;
  for (int i = 0; i < kRarePoolSize; ++i) {
    for (int j = i + 1; j < kRarePoolSize; ++j) {
      rare_pairs.emplace_back(kRareLabels[i], kRareLabels[j]);
    }
  }
  Rng pair_rng(derive_seed(spec.seed, 600));
  for (std::size_t i = rare_pairs.size(); i > 1; --i) {
    std::swap(rare_pairs[i - 1], rare_pairs[pair_rng.uniform_int(0, i - 1)]);
  }

  for (std::size_t s = 0; s < world.scenes.size(); ++s) {
    SceneInfo& scene = world.scenes[s];
    const bool is_corridor = spec.rooms > 4 && scene.id == 0;
    const RoomTypeProfile* profile;
    if (is_corridor) {
      profile = &hallway;
    } else {
      Rng type_rng(derive_seed(spec.seed, 500, static_cast<std::uint64_t>(scene.region)));
      profile = &spec.room_types[type_rng.uniform_int(0, spec.room_types.size() - 1)];
    }
    scene.room_type = profile->name;
    place_objects(world, rects[s], scene, *profile, rare_pairs[s % rare_pairs.size()]);
  }
  return world;
}

Observation render_observation(const SynthWorld& world, const Pose2& pose, double fov) {
  if (fov <= 0.0 || fov > kTwoPi) {
    throw std::invalid_argument("fov must lie in (0, 2*pi]");
  }
  if (!world.grid.free_at(pose.position)) {
    throw DomainError(Errc::invalid_pose, "viewpoint is outside free space");
  }
  const int region = world.grid.region_at(pose.position);
  Observation obs;
  obs.pose = pose;
  obs.fov = fov;
  for (const auto& world_obj : world.objects) {
    if (world_obj.region != region) continue;
    ObjectInstance obj = world_obj.object;
    const Vec2 rel =
        rotate({obj.centroid.x - pose.position.x, obj.centroid.y - pose.position.y},
               -pose.heading);
    obj.centroid.x = rel.x;
    obj.centroid.y = rel.y;
    if (fov < kTwoPi) {
      const double azimuth = std::atan2(rel.y, rel.x);
      if (std::fabs(azimuth) > fov / 2.0) continue;
    }
    obs.objects.push_back(std::move(obj));
  }
  return obs;
}

Observation perturb(const Observation& obs, PerturbKind kind, double magnitude,
                    std::uint64_t seed) {
  if (magnitude < 0.0) {
    throw std::invalid_argument("perturbation magnitude must be nonnegative");
  }
  Observation out = obs;
  Rng rng(derive_seed(seed, 77, static_cast<std::uint64_t>(kind)));
  switch (kind) {
  case PerturbKind::kSpatial:
    for (auto& obj : out.objects) {
      obj.centroid.x += rng.normal(0.0, magnitude);
      obj.centroid.y += rng.normal(0.0, magnitude);
      obj.centroid.z += rng.normal(0.0, magnitude);
    }
    break;
  case PerturbKind::kOrientation: {
    // A heading error of the given magnitude, sign drawn from the seed,
    // rotates every viewer-frame direction the opposite way.
    const double err = (rng.uniform01() < 0.5 ? -1.0 : 1.0) * magnitude;
    for (auto& obj : out.objects) {
      const Vec2 rel = rotate({obj.centroid.x, obj.centroid.y}, -err);
      obj.centroid.x = rel.x;
      obj.centroid.y = rel.y;
    }
    break;
  }
  case PerturbKind::kObjectDrop: {
    const std::size_t n = out.objects.size();
    const std::size_t drop = static_cast<std::size_t>(std::floor(magnitude * n));
    if (drop >= n) {
      throw DomainError(Errc::empty_scene, "perturbation would drop every object");
    }
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) {
      std::swap(order[i - 1], order[rng.uniform_int(0, i - 1)]);
    }
    std::vector<std::uint8_t> dropped(n, 0);
    for (std::size_t i = 0; i < drop; ++i) dropped[order[i]] = 1;
    std::vector<ObjectInstance> kept;
    kept.reserve(n - drop);
    for (std::size_t i = 0; i < n; ++i) {
      if (!dropped[i]) kept.push_back(std::move(out.objects[i]));
    }
    out.objects = std::move(kept);
    break;
  }
  }
  return out;
}

SaliencyGraph360 query_graph(const Observation& obs, double saliency_floor, int scene_id) {
  return build_saliency_graph(scene_id, normalize_saliency(obs.objects), saliency_floor);
}

TopoMap build_topo_map(const SynthWorld& world) {
  std::vector<MapNode> nodes;
  for (const auto& scene : world.scenes) {
    MapNode node;
    node.id = scene.id;
    node.kind = NodeKind::kScene;
    node.position = scene.node_position;
    node.region = scene.region;
    const Observation obs = render_observation(world, {scene.node_position, 0.0});
    node.graph = query_graph(obs, world.spec.saliency_floor, scene.id);
    nodes.push_back(std::move(node));
  }
  int next_id = static_cast<int>(world.scenes.size());
  for (const Vec2& point : detect_transition_nodes(world.grid)) {
    MapNode node;
    node.id = next_id++;
    node.kind = NodeKind::kTransition;
    node.position = point;
    node.region = world.grid.region_at(point);
    nodes.push_back(std::move(node));
  }
  return make_topo_map(std::move(nodes), world.grid);
}

void write_world(const SynthWorld& world, const std::string& dir) {
  fs::create_directories(dir);
  const fs::path base(dir);
  write_grid_file((base / "world.grid").string(), world.grid);

  std::ofstream manifest(base / "world.manifest");
  if (!manifest) {
    throw std::runtime_error("cannot write world manifest in " + dir);
  }
  manifest << "WORLD v1\n";
  manifest << "seed " << world.spec.seed << "\n";
  manifest << "floor " << full17(world.spec.saliency_floor) << "\n";
  manifest << "grid world.grid\n";
  for (const auto& scene : world.scenes) {
    const std::string obs_file = "scene_" + std::to_string(scene.id) + ".obs";
    manifest << "scene " << scene.id << ' ' << scene.region << ' ' << scene.room_type << ' '
             << full17(scene.node_position.x) << ' ' << full17(scene.node_position.y) << ' '
             << obs_file << "\n";
    const Observation obs = render_observation(world, {scene.node_position, 0.0});
    write_observation_file((base / obs_file).string(), obs.objects,
                           "scene " + std::to_string(scene.id) + " (" + scene.room_type + ")");
  }
  for (const auto& obj : world.objects) {
    manifest << "object " << obj.region << ' ' << obj.object.label << ' '
             << fixed6(obj.object.centroid.x) << ' ' << fixed6(obj.object.centroid.y) << ' '
             << fixed6(obj.object.centroid.z) << ' ' << fixed6(obj.object.extents.x) << ' '
             << fixed6(obj.object.extents.y) << ' ' << fixed6(obj.object.extents.z) << "\n";
  }
}

SynthWorld load_world(const std::string& dir) {
  const fs::path base(dir);
  std::ifstream manifest(base / "world.manifest");
  if (!manifest) {
    throw std::runtime_error("cannot open world manifest in " + dir);
  }
  std::string header;
  std::getline(manifest, header);
  {
    std::istringstream h(header);
    std::string magic, version;
    h >> magic >> version;
    if (magic != "WORLD") {
      throw std::runtime_error("not a WORLD manifest: " + dir);
    }
    if (version != "v1") {
      throw DomainError(Errc::unsupported_version, "world manifest version " + version);
    }
  }
  SynthWorld world;
  std::string line;
  while (std::getline(manifest, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream row(line);
    std::string key;
    row >> key;
    if (key == "seed") {
      row >> world.spec.seed;
    } else if (key == "floor") {
      row >> world.spec.saliency_floor;
    } else if (key == "grid") {
      std::string grid_file;
      row >> grid_file;
      world.grid = read_grid_file((base / grid_file).string());
    } else if (key == "scene") {
      SceneInfo scene;
      std::string obs_file;
      row >> scene.id >> scene.region >> scene.room_type >> scene.node_position.x >>
          scene.node_position.y >> obs_file;
      world.scenes.push_back(scene);
    } else if (key == "object") {
      WorldObject obj;
      row >> obj.region >> obj.object.label >> obj.object.centroid.x >> obj.object.centroid.y >>
          obj.object.centroid.z >> obj.object.extents.x >> obj.object.extents.y >>
          obj.object.extents.z;
      world.objects.push_back(std::move(obj));
    } else {
      throw std::runtime_error("unknown manifest entry: " + key);
    }
  }
  world.spec.rooms = static_cast<int>(world.scenes.size());
  world.spec.cell_size = world.grid.cell_size;
  return world;
}

TopoMap build_topo_map_from_dir(const std::string& dir) {
  const fs::path base(dir);
  const SynthWorld world = load_world(dir);
  std::vector<MapNode> nodes;
  for (const auto& scene : world.scenes) {
    MapNode node;
    node.id = scene.id;
    node.kind = NodeKind::kScene;
    node.position = scene.node_position;
    node.region = scene.region;
    const std::string obs_file = "scene_" + std::to_string(scene.id) + ".obs";
    const std::vector<ObjectInstance> objects =
        read_observation_file((base / obs_file).string());
    node.graph = build_saliency_graph(scene.id, normalize_saliency(objects),
                                      world.spec.saliency_floor);
    nodes.push_back(std::move(node));
  }
  int next_id = static_cast<int>(world.scenes.size());
  for (const Vec2& point : detect_transition_nodes(world.grid)) {
    MapNode node;
    node.id = next_id++;
    node.kind = NodeKind::kTransition;
    node.position = point;
    node.region = world.grid.region_at(point);
    nodes.push_back(std::move(node));
  }
  return make_topo_map(std::move(nodes), world.grid);
}

}  // namespace salgraph
