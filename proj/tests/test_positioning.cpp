#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "salgraph/positioning.hpp"
#include "salgraph/rng.hpp"
#include "salgraph/synth_world.hpp"

using namespace salgraph;

namespace {

CorrespondenceSet shifted_pairs_2d(const std::vector<Vec2>& u, const Vec2& shift,
                                   double heading = 0.0) {
  CorrespondenceSet corr;
  corr.dimension = 2;
  for (const auto& point : u) {
    Correspondence pair;
    pair.u = {point.x, point.y, 0.0};
    const Vec2 v = rotate(point - shift, -heading);
    pair.v = {v.x, v.y, 0.0};
    pair.saliency = 1.0;
    corr.pairs.push_back(pair);
  }
  return corr;
}

}  // namespace

TEST_CASE("shift recovery from correspondences") {
  // u = {(1,0),(0,1),(2,2)}, v = u - (1,1)
  const auto corr = shifted_pairs_2d({{1, 0}, {0, 1}, {2, 2}}, {1, 1});
  const ShiftEstimate est = estimate_shift(corr);
  CHECK(est.rank == 2);
  CHECK(std::fabs(est.shift.x - 1.0) < 1e-9);
  CHECK(std::fabs(est.shift.y - 1.0) < 1e-9);

  // identical frames give a zero shift
  const auto same = shifted_pairs_2d({{1, 0}, {0, 1}, {2, 2}}, {0, 0});
  const ShiftEstimate zero = estimate_shift(same);
  CHECK(std::fabs(zero.shift.x) < 1e-12);
  CHECK(std::fabs(zero.shift.y) < 1e-12);
}

TEST_CASE("collinear references leave the shift underdetermined") {
  // u on the x-axis: pairwise differences span rank 1, the minimum-norm
  // solution keeps only the x component of the true shift (3, 7).
  const auto corr = shifted_pairs_2d({{0, 0}, {1, 0}, {2, 0}}, {3, 7});
  const ShiftEstimate est = estimate_shift(corr);
  CHECK(est.rank == 1);
  CHECK(std::fabs(est.shift.x - 3.0) < 1e-9);
  CHECK(std::fabs(est.shift.y - 0.0) < 1e-9);
}

TEST_CASE("shift estimation needs two pairs") {
  CorrespondenceSet corr;
  corr.dimension = 2;
  corr.pairs.push_back({{1, 2, 0}, {0, 0, 0}, 1.0});
  CHECK_THROWS_WITH_AS(estimate_shift(corr), doctest::Contains("InsufficientCorrespondences"),
                       DomainError);
}

TEST_CASE("pairwise orientation is the signed angle from query to scene direction") {
  CorrespondenceSet shifted;
  shifted.dimension = 2;
  auto push = [&](double scene_deg, double query_deg) {
    Correspondence pair;
    pair.u = {std::cos(deg_to_rad(scene_deg)), std::sin(deg_to_rad(scene_deg)), 0.0};
    pair.v = {std::cos(deg_to_rad(query_deg)), std::sin(deg_to_rad(query_deg)), 0.0};
    pair.saliency = 1.0;
    shifted.pairs.push_back(pair);
  };
  push(30.0, 10.0);    // +20 degrees
  push(45.0, 45.0);    // identity
  push(350.0, 10.0);   // wraps to -20, not +340
  const auto thetas = pairwise_orientation(shifted);
  REQUIRE(thetas.size() == 3);
  CHECK(thetas[0] == doctest::Approx(deg_to_rad(20.0)).epsilon(1e-12));
  CHECK(thetas[1] == doctest::Approx(0.0));
  CHECK(thetas[2] == doctest::Approx(deg_to_rad(-20.0)).epsilon(1e-12));

  shifted.pairs[0].v = {0, 0, 0};
  CHECK_THROWS_WITH_AS(pairwise_orientation(shifted), doctest::Contains("DegenerateDirection"),
                       DomainError);
}

TEST_CASE("orientation alignment is a weighted circular mean") {
  // {10, 20} degrees with weights {2, 1}: the arithmetic form gives 13.33
  // degrees and the circular mean sits within 0.05 degrees of it.
  const std::vector<double> thetas{deg_to_rad(10.0), deg_to_rad(20.0)};
  const std::vector<double> weights{2.0, 1.0};
  const double arithmetic =
      (weights[0] * thetas[0] + weights[1] * thetas[1]) / (weights[0] + weights[1]);
  const double circular = align_orientation(thetas, weights);
  CHECK(std::fabs(circular - arithmetic) < deg_to_rad(0.05));
  CHECK(circular == doctest::Approx(deg_to_rad(13.3333)).epsilon(1e-3));

  // constant input: exactly that value
  CHECK(align_orientation({0.7, 0.7, 0.7}, {1, 2, 3}) == doctest::Approx(0.7));

  // wrap-around: {+179, -179} degrees averages to 180, not 0
  const double seam =
      align_orientation({deg_to_rad(179.0), deg_to_rad(-179.0)}, {1.0, 1.0});
  CHECK(std::fabs(seam) == doctest::Approx(kPi).epsilon(1e-9));

  CHECK_THROWS_WITH_AS(align_orientation({0.1}, {0.0}), doctest::Contains("ZeroWeight"),
                       DomainError);
}

TEST_CASE("circular and arithmetic means agree on half-plane-confined angles") {
  Rng rng(88);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + static_cast<int>(rng.uniform_int(0, 6));
    std::vector<double> thetas, weights;
    for (int i = 0; i < n; ++i) {
      thetas.push_back(rng.uniform(-0.5, 0.5));  // well inside one half-plane
      weights.push_back(rng.uniform(0.1, 1.0));
    }
    double wsum = 0.0, tsum = 0.0;
    for (int i = 0; i < n; ++i) {
      wsum += weights[i];
      tsum += weights[i] * thetas[i];
    }
    const double arithmetic = tsum / wsum;
    const double circular = align_orientation(thetas, weights);
    // first-order agreement: the gap shrinks with the angular spread
    CHECK(std::fabs(circular - arithmetic) < 0.02);
  }
}

TEST_CASE("3d rotation recovery about the common origin") {
  Rng rng(99);
  CorrespondenceSet corr;
  corr.dimension = 3;
  const double angle = deg_to_rad(30.0);
  for (int i = 0; i < 6; ++i) {
    const Vec3 p{rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3)};
    const Vec2 xy = rotate({p.x, p.y}, -angle);  // query rotated by -30 degrees
    Correspondence pair;
    pair.u = p;
    pair.v = {xy.x, xy.y, p.z};
    pair.saliency = rng.uniform(0.3, 1.0);
    corr.pairs.push_back(pair);
  }
  const Rotation3d rot = estimate_rotation_3d(corr);
  CHECK(rot.euler_xyz.x == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rot.euler_xyz.y == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(rot.euler_xyz.z == doctest::Approx(angle).epsilon(1e-9));
  // matrix maps query points onto scene points
  for (const auto& pair : corr.pairs) {
    const double rx = rot.matrix[0][0] * pair.v.x + rot.matrix[0][1] * pair.v.y +
                      rot.matrix[0][2] * pair.v.z;
    const double ry = rot.matrix[1][0] * pair.v.x + rot.matrix[1][1] * pair.v.y +
                      rot.matrix[1][2] * pair.v.z;
    CHECK(rx == doctest::Approx(pair.u.x).epsilon(1e-9));
    CHECK(ry == doctest::Approx(pair.u.y).epsilon(1e-9));
  }

  // identity when both sides agree
  for (auto& pair : corr.pairs) pair.v = pair.u;
  const Rotation3d ident = estimate_rotation_3d(corr);
  CHECK(ident.matrix[0][0] == doctest::Approx(1.0));
  CHECK(ident.euler_xyz.z == doctest::Approx(0.0));
}

TEST_CASE("rotation estimation rejects degenerate geometry") {
  CorrespondenceSet corr;
  corr.dimension = 3;
  corr.pairs.push_back({{1, 0, 0}, {1, 0, 0}, 1.0});
  corr.pairs.push_back({{2, 0, 0}, {2, 0, 0}, 1.0});
  CHECK_THROWS_WITH_AS(estimate_rotation_3d(corr),
                       doctest::Contains("UnderdeterminedRotation"), DomainError);
  // a line through the origin spans rank 1
  corr.pairs.push_back({{3, 0, 0}, {3, 0, 0}, 1.0});
  CHECK_THROWS_WITH_AS(estimate_rotation_3d(corr),
                       doctest::Contains("UnderdeterminedRotation"), DomainError);
}

TEST_CASE("full 2d pose recovery on random rigid instances") {
  Rng rng(1234);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 3 + static_cast<int>(rng.uniform_int(0, 7));
    std::vector<Vec2> u;
    for (int i = 0; i < n; ++i) u.push_back({rng.uniform(-5, 5), rng.uniform(-5, 5)});
    // enforce a spanning triple
    u[1].x = u[0].x + 2.0;
    u[2].y = u[0].y + 2.0;
    const Vec2 shift{rng.uniform(-2, 2), rng.uniform(-2, 2)};
    const double heading = rng.uniform(-kPi, kPi);
    auto corr = shifted_pairs_2d(u, shift, heading);
    for (auto& pair : corr.pairs) pair.saliency = rng.uniform(0.2, 1.0);

    const PoseEstimate pose = estimate_pose_2d(corr);
    CHECK(pose.shift_determinate);
    CHECK(std::fabs(pose.shift.x - shift.x) < 1e-9);
    CHECK(std::fabs(pose.shift.y - shift.y) < 1e-9);
    CHECK(angle_abs_diff(pose.orientation, heading) < 1e-9);
  }
}

TEST_CASE("translation equivariance of the shift estimate") {
  Rng rng(4321);
  std::vector<Vec2> u{{0, 0}, {2, 0}, {1, 2}, {-1, 1}};
  const Vec2 shift{0.5, -0.25};
  const auto base = estimate_shift(shifted_pairs_2d(u, shift));
  const Vec2 t{rng.uniform(-3, 3), rng.uniform(-3, 3)};
  auto moved = shifted_pairs_2d(u, shift);
  for (auto& pair : moved.pairs) {
    pair.u.x += t.x;
    pair.u.y += t.y;
  }
  const auto after = estimate_shift(moved);
  CHECK(after.shift.x - base.shift.x == doctest::Approx(t.x).epsilon(1e-9));
  CHECK(after.shift.y - base.shift.y == doctest::Approx(t.y).epsilon(1e-9));
}

TEST_CASE("pair order does not change the pose") {
  Rng rng(999);
  std::vector<Vec2> u;
  for (int i = 0; i < 8; ++i) u.push_back({rng.uniform(-4, 4), rng.uniform(-4, 4)});
  auto corr = shifted_pairs_2d(u, {1.25, -0.75}, 0.6);
  for (auto& pair : corr.pairs) pair.saliency = rng.uniform(0.2, 1.0);
  const PoseEstimate base = estimate_pose_2d(corr);

  auto shuffled = corr;
  for (std::size_t i = shuffled.pairs.size(); i > 1; --i) {
    std::swap(shuffled.pairs[i - 1], shuffled.pairs[rng.uniform_int(0, i - 1)]);
  }
  const PoseEstimate after = estimate_pose_2d(shuffled);
  CHECK(std::fabs(after.shift.x - base.shift.x) < 1e-12);
  CHECK(std::fabs(after.shift.y - base.shift.y) < 1e-12);
  CHECK(angle_abs_diff(after.orientation, base.orientation) < 1e-12);
}

TEST_CASE("planar rotation recovery matches the 2d orientation path") {
  Rng rng(31415);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 4 + static_cast<int>(rng.uniform_int(0, 4));
    const double heading = rng.uniform(-kPi, kPi);
    CorrespondenceSet planar;
    planar.dimension = 3;
    CorrespondenceSet flat;
    flat.dimension = 2;
    for (int i = 0; i < n; ++i) {
      const Vec2 p{rng.uniform(-4, 4), rng.uniform(-4, 4)};
      const Vec2 q = rotate(p, -heading);
      const double s = rng.uniform(0.2, 1.0);
      planar.pairs.push_back({{p.x, p.y, 0.0}, {q.x, q.y, 0.0}, s});
      flat.pairs.push_back({{p.x, p.y, 0.0}, {q.x, q.y, 0.0}, s});
    }
    const Rotation3d rot = estimate_rotation_3d(planar);
    const auto thetas = pairwise_orientation(flat);
    std::vector<double> weights;
    for (const auto& pair : flat.pairs) weights.push_back(pair.saliency);
    const double theta_2d = align_orientation(thetas, weights);
    CHECK(angle_abs_diff(rot.euler_xyz.z, theta_2d) < 1e-9);
  }
}

TEST_CASE("pose estimation from a rendered observation recovers the true pose") {
  const SynthWorld world = generate_world(default_world_spec(6, 17));
  const TopoMap map = build_topo_map(world);

  // Query rendered away from the node with a rotated heading.
  const SceneInfo& scene = world.scenes[2];
  const Pose2 pose{{scene.node_position.x + 0.5, scene.node_position.y - 0.3},
                   deg_to_rad(15.0)};
  const Observation obs = render_observation(world, pose);
  const SaliencyGraph360 query = query_graph(obs);
  const LocalizationResult loc = localize(query, map);
  CHECK(loc.matched_scene_id == scene.id);
  const PoseEstimate estimate = estimate_pose(loc, query, map);
  CHECK(std::fabs(estimate.shift.x - 0.5) < 1e-6);
  CHECK(std::fabs(estimate.shift.y - (-0.3)) < 1e-6);
  CHECK(angle_abs_diff(estimate.orientation, deg_to_rad(15.0)) < 1e-6);
  CHECK(estimate.shift_determinate);

  // Rendering at the node pose itself gives the identity.
  const Observation at_node = render_observation(world, {scene.node_position, 0.0});
  const SaliencyGraph360 self_query = query_graph(at_node);
  const LocalizationResult self_loc = localize(self_query, map);
  const PoseEstimate self_pose = estimate_pose(self_loc, self_query, map);
  CHECK(std::fabs(self_pose.shift.x) < 1e-6);
  CHECK(std::fabs(self_pose.shift.y) < 1e-6);
  CHECK(angle_abs_diff(self_pose.orientation, 0.0) < 1e-6);
}
