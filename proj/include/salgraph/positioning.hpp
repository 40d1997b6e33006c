#pragma once

#include <vector>

#include "salgraph/geometry.hpp"
#include "salgraph/localization.hpp"

namespace salgraph {

// Matched point pairs between a stored scene frame (u) and a query frame (v),
// with the saliency of the matched object.
struct Correspondence {
  Vec3 u;
  Vec3 v;
  double saliency = 1.0;
};

struct CorrespondenceSet {
  std::vector<Correspondence> pairs;
  int dimension = 2;  // 2 or 3
};

struct ShiftEstimate {
  Vec3 shift;  // z stays 0 for 2D sets
  int rank = 0;
};

// Least-squares translation between the two frames from pairwise norm
// differences: rows (u_i - u_j) against half the squared-norm differences,
// solved by SVD pseudoinverse over all C(N,2) pairs. Rank below the
// dimension means the shift is only determined up to the row-space
// complement; the minimum-norm solution is returned.
ShiftEstimate estimate_shift(const CorrespondenceSet& corr);

// Signed angle from each query direction to its stored-scene counterpart,
// in (-pi, pi]. Call with the u side already shifted into the query's
// reference point. 2D sets only.
std::vector<double> pairwise_orientation(const CorrespondenceSet& shifted);

// Saliency-weighted circular mean of the per-pair angles.
double align_orientation(const std::vector<double>& thetas, const std::vector<double>& saliencies);

struct Rotation3d {
  double matrix[3][3];
  Vec3 euler_xyz;  // (alpha, beta, gamma) with R = Rx(alpha) Ry(beta) Rz(gamma)
};

// Best proper rotation taking the query points onto the stored-scene points
// about the common origin (saliency-weighted, reflection excluded). Call
// with the u side already shifted. Requires 3 or more pairs spanning at
// least a plane through the origin.
Rotation3d estimate_rotation_3d(const CorrespondenceSet& shifted);

struct PoseEstimate {
  Vec2 shift;                     // query reference point minus scene reference point
  double orientation = 0.0;       // (-pi, pi]; query heading in the scene frame
  bool shift_determinate = false; // rank reached the dimension
  int rank = 0;
};

// 2D pose of the query viewpoint relative to the matched scene node:
// least-squares shift from the matched node centroids, then orientation
// from the saliency-weighted circular mean of pairwise angle differences.
PoseEstimate estimate_pose(const LocalizationResult& localization, const SaliencyGraph360& query,
                           const TopoMap& map);

// Same computation over an explicit 2D correspondence set.
PoseEstimate estimate_pose_2d(const CorrespondenceSet& corr);

}  // namespace salgraph
