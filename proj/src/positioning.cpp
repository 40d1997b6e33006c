#include "salgraph/positioning.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>

#include <cmath>
#include <limits>

namespace salgraph {

namespace {

double squared_norm(const Vec3& v, int dimension) {
  double s = v.x * v.x + v.y * v.y;
  if (dimension == 3) s += v.z * v.z;
  return s;
}

}  // namespace

ShiftEstimate estimate_shift(const CorrespondenceSet& corr) {
  const std::size_t n = corr.pairs.size();
  const int dim = corr.dimension;
  if (dim != 2 && dim != 3) {
    throw std::invalid_argument("correspondence dimension must be 2 or 3");
  }
  if (n < 2) {
    throw DomainError(Errc::insufficient_correspondences,
                      "shift estimation needs at least two matched pairs");
  }
  const std::size_t rows = n * (n - 1) / 2;
  Eigen::MatrixXd B(rows, dim);
  Eigen::VectorXd b(rows);
  std::size_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++r) {
      const Vec3 du = corr.pairs[i].u - corr.pairs[j].u;
      B(r, 0) = du.x;
      B(r, 1) = du.y;
      if (dim == 3) B(r, 2) = du.z;
      b(r) = squared_norm(corr.pairs[i].u, dim) - squared_norm(corr.pairs[j].u, dim) -
             squared_norm(corr.pairs[i].v, dim) + squared_norm(corr.pairs[j].v, dim);
    }
  }

  Eigen::JacobiSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sigma = svd.singularValues();
  const double tol = sigma.size() > 0
                         ? sigma(0) * std::numeric_limits<double>::epsilon() *
                               static_cast<double>(std::max<std::size_t>(rows, dim))
                         : 0.0;
  int rank = 0;
  for (Eigen::Index k = 0; k < sigma.size(); ++k) {
    if (sigma(k) > tol) ++rank;
  }

  // Minimum-norm least-squares solution of B * delta = b / 2 via the
  // truncated pseudoinverse.
  Eigen::VectorXd delta = Eigen::VectorXd::Zero(dim);
  const Eigen::VectorXd utb = svd.matrixU().transpose() * b;
  for (int k = 0; k < rank; ++k) {
    delta += (utb(k) / sigma(k)) * svd.matrixV().col(k);
  }
  delta *= 0.5;

  ShiftEstimate out;
  out.shift = {delta(0), delta(1), dim == 3 ? delta(2) : 0.0};
  out.rank = rank;
  return out;
}

std::vector<double> pairwise_orientation(const CorrespondenceSet& shifted) {
  if (shifted.dimension != 2) {
    throw std::invalid_argument("pairwise orientation is defined for 2D sets");
  }
  std::vector<double> thetas;
  thetas.reserve(shifted.pairs.size());
  for (const auto& pair : shifted.pairs) {
    const Vec2 u{pair.u.x, pair.u.y};
    const Vec2 v{pair.v.x, pair.v.y};
    if ((u.x == 0.0 && u.y == 0.0) || (v.x == 0.0 && v.y == 0.0)) {
      throw DomainError(Errc::degenerate_direction,
                        "matched point coincides with the frame origin");
    }
    // Signed rotation carrying the query direction onto the scene direction.
    thetas.push_back(wrap_pi(std::atan2(cross(v, u), dot(v, u))));
  }
  return thetas;
}

double align_orientation(const std::vector<double>& thetas,
                         const std::vector<double>& saliencies) {
  if (thetas.empty() || thetas.size() != saliencies.size()) {
    throw std::invalid_argument("angle and weight sequences must be nonempty and equal-length");
  }
  double sum_w = 0.0, sum_sin = 0.0, sum_cos = 0.0;
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    sum_w += saliencies[i];
    sum_sin += saliencies[i] * std::sin(thetas[i]);
    sum_cos += saliencies[i] * std::cos(thetas[i]);
  }
  if (sum_w <= 0.0) {
    throw DomainError(Errc::zero_weight, "all orientation weights are zero");
  }
  return wrap_pi(std::atan2(sum_sin, sum_cos));
}

Rotation3d estimate_rotation_3d(const CorrespondenceSet& shifted) {
  if (shifted.dimension != 3) {
    throw std::invalid_argument("rotation estimation is defined for 3D sets");
  }
  if (shifted.pairs.size() < 3) {
    throw DomainError(Errc::underdetermined_rotation,
                      "rotation estimation needs at least three matched pairs");
  }
  // Weighted cross-covariance of query against scene points about the origin.
  Eigen::Matrix3d H = Eigen::Matrix3d::Zero();
  for (const auto& pair : shifted.pairs) {
    const Eigen::Vector3d u(pair.u.x, pair.u.y, pair.u.z);
    const Eigen::Vector3d v(pair.v.x, pair.v.y, pair.v.z);
    H += pair.saliency * v * u.transpose();
  }
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(H, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Eigen::Vector3d sigma = svd.singularValues();
  const double tol = sigma(0) * std::numeric_limits<double>::epsilon() * 3.0;
  int rank = 0;
  for (int k = 0; k < 3; ++k) {
    if (sigma(k) > tol) ++rank;
  }
  if (rank < 2) {
    throw DomainError(Errc::underdetermined_rotation,
                      "matched points do not span a plane through the origin");
  }
  Eigen::Matrix3d d = Eigen::Matrix3d::Identity();
  d(2, 2) = (svd.matrixV() * svd.matrixU().transpose()).determinant() < 0.0 ? -1.0 : 1.0;
  const Eigen::Matrix3d R = svd.matrixV() * d * svd.matrixU().transpose();

  Rotation3d out;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      out.matrix[i][j] = R(i, j);
    }
  }
  // Euler extraction for R = Rx(alpha) Ry(beta) Rz(gamma).
  const double sin_beta = std::clamp(R(0, 2), -1.0, 1.0);
  out.euler_xyz.y = std::asin(sin_beta);
  if (std::fabs(sin_beta) < 1.0 - 1e-12) {
    out.euler_xyz.x = std::atan2(-R(1, 2), R(2, 2));
    out.euler_xyz.z = std::atan2(-R(0, 1), R(0, 0));
  } else {
    // Gimbal lock: fix gamma at 0.
    out.euler_xyz.x = std::atan2(R(1, 0), R(1, 1));
    out.euler_xyz.z = 0.0;
  }
  return out;
}

PoseEstimate estimate_pose_2d(const CorrespondenceSet& corr) {
  if (corr.dimension != 2) {
    throw std::invalid_argument("pose estimation runs on 2D correspondences");
  }
  const ShiftEstimate shift = estimate_shift(corr);

  CorrespondenceSet shifted = corr;
  for (auto& pair : shifted.pairs) {
    pair.u.x -= shift.shift.x;
    pair.u.y -= shift.shift.y;
  }
  const std::vector<double> thetas = pairwise_orientation(shifted);
  std::vector<double> weights;
  weights.reserve(shifted.pairs.size());
  for (const auto& pair : shifted.pairs) weights.push_back(pair.saliency);

  PoseEstimate pose;
  pose.shift = {shift.shift.x, shift.shift.y};
  pose.orientation = align_orientation(thetas, weights);
  pose.rank = shift.rank;
  pose.shift_determinate = shift.rank == corr.dimension;
  return pose;
}

PoseEstimate estimate_pose(const LocalizationResult& localization, const SaliencyGraph360& query,
                           const TopoMap& map) {
  const MapNode* node = map.find_node(localization.matched_scene_id);
  if (node == nullptr || !node->graph.has_value()) {
    throw std::invalid_argument("localization result does not name a scene node of the map");
  }
  const SaliencyGraph360& matched = *node->graph;
  CorrespondenceSet corr;
  corr.dimension = 2;
  for (const auto& [qa, cb] : localization.alignment.pairs) {
    Correspondence pair;
    pair.u = matched.nodes[cb].object.centroid;
    pair.v = query.nodes[qa].object.centroid;
    pair.u.z = pair.v.z = 0.0;
    pair.saliency = matched.nodes[cb].object.saliency;
    corr.pairs.push_back(pair);
  }
  if (corr.pairs.size() < 2) {
    throw DomainError(Errc::insufficient_correspondences,
                      "pose estimation needs at least two matched nodes");
  }
  return estimate_pose_2d(corr);
}

}  // namespace salgraph
