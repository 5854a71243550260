#include "sherdreg/geometry.hpp"

#include "sherdreg/errors.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace sherdreg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::PreconditionViolation: return "PreconditionViolation";
    case ErrorCode::DegenerateCloud: return "DegenerateCloud";
    case ErrorCode::AlphaTooSmall: return "AlphaTooSmall";
    case ErrorCode::AlphaDegenerate: return "AlphaDegenerate";
    case ErrorCode::InvalidPolygon: return "InvalidPolygon";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SizeMismatch: return "SizeMismatch";
    case ErrorCode::DegenerateCorrespondence: return "DegenerateCorrespondence";
    case ErrorCode::NoViews: return "NoViews";
    case ErrorCode::TooFewNeighbors: return "TooFewNeighbors";
    case ErrorCode::InsufficientCorrespondences: return "InsufficientCorrespondences";
    case ErrorCode::NonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::DistinctnessFailure: return "DistinctnessFailure";
    case ErrorCode::EmptyCloud: return "EmptyCloud";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::FormatError: return "FormatError";
  }
  return "Unknown";
}

PointCloud::PointCloud(std::vector<Vec3> points, std::vector<std::vector<int>> visibility)
    : points_(std::move(points)), visibility_(std::move(visibility)) {
  for (const auto& p : points_) {
    if (!p.allFinite()) throw Error(ErrorCode::PreconditionViolation, "point cloud contains a non-finite coordinate");
  }
  if (!visibility_.empty() && visibility_.size() != points_.size()) {
    throw Error(ErrorCode::PreconditionViolation, "visibility list count does not match point count");
  }
}

Vec3 PointCloud::centroid() const {
  Vec3 c = Vec3::Zero();
  for (const auto& p : points_) c += p;
  return points_.empty() ? c : Vec3(c / static_cast<double>(points_.size()));
}

RigidTransform RigidTransform::inverse() const {
  RigidTransform inv;
  inv.rotation = rotation.transpose();
  inv.translation = -(inv.rotation * translation);
  return inv;
}

RigidTransform operator*(const RigidTransform& a, const RigidTransform& b) {
  RigidTransform c;
  c.rotation = a.rotation * b.rotation;
  c.translation = a.rotation * b.translation + a.translation;
  return c;
}

bool RigidTransform::is_proper(double tol) const {
  if (!rotation.allFinite() || !translation.allFinite()) return false;
  const double ortho = (rotation.transpose() * rotation - Mat3::Identity()).cwiseAbs().maxCoeff();
  return ortho <= tol && std::abs(rotation.determinant() - 1.0) <= tol;
}

Eigen::Matrix4d RigidTransform::matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation;
  m.topRightCorner<3, 1>() = translation;
  return m;
}

RigidTransform from_axis_angle(const Vec3& axis, double angle_rad, const Vec3& translation) {
  RigidTransform t;
  t.rotation = Eigen::AngleAxisd(angle_rad, axis.normalized()).toRotationMatrix();
  t.translation = translation;
  return t;
}

double rotation_angle_between(const Mat3& a, const Mat3& b) {
  const Mat3 d = a * b.transpose();
  const double c = std::clamp((d.trace() - 1.0) / 2.0, -1.0, 1.0);
  // acos loses precision near zero; recover the small-angle branch from the
  // skew part instead.
  const Vec3 skew(d(2, 1) - d(1, 2), d(0, 2) - d(2, 0), d(1, 0) - d(0, 1));
  return std::atan2(0.5 * skew.norm(), c);
}

void complete_basis(const Vec3& normal, Vec3& basis_u, Vec3& basis_v) {
  Eigen::Index axis = 0;
  normal.cwiseAbs().minCoeff(&axis);
  const Vec3 e = Vec3::Unit(axis);
  basis_u = (e - e.dot(normal) * normal).normalized();
  basis_v = normal.cross(basis_u);
}

Plane fit_plane_pca(std::span<const Vec3> points) {
  if (points.size() < 3) throw Error(ErrorCode::DegenerateCloud, "plane fit needs at least 3 points");

  Vec3 c = Vec3::Zero();
  for (const auto& p : points) c += p;
  c /= static_cast<double>(points.size());

  Mat3 cov = Mat3::Zero();
  for (const auto& p : points) {
    const Vec3 d = p - c;
    cov.noalias() += d * d.transpose();
  }
  cov /= static_cast<double>(points.size());

  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const Vec3 lambda = eig.eigenvalues();  // ascending
  if (!(lambda(2) > 0.0) || lambda(1) <= 1e-12 * lambda(2)) {
    throw Error(ErrorCode::DegenerateCloud, "points are collinear or coincident (covariance rank < 2)");
  }

  Plane plane;
  plane.centroid = c;
  Vec3 n = eig.eigenvectors().col(0).normalized();
  Eigen::Index dominant = 0;
  n.cwiseAbs().maxCoeff(&dominant);
  if (n(dominant) < 0.0) n = -n;
  plane.normal = n;
  complete_basis(n, plane.basis_u, plane.basis_v);
  return plane;
}

Plane fit_plane_pca(const PointCloud& cloud) { return fit_plane_pca(std::span<const Vec3>(cloud.points())); }

std::vector<Vec2> project_to_plane(std::span<const Vec3> points, const Plane& plane) {
  std::vector<Vec2> out;
  out.reserve(points.size());
  for (const auto& p : points) {
    const Vec3 d = p - plane.centroid;
    out.emplace_back(d.dot(plane.basis_u), d.dot(plane.basis_v));
  }
  return out;
}

std::vector<Vec2> project_to_plane(const PointCloud& cloud, const Plane& plane) {
  return project_to_plane(std::span<const Vec3>(cloud.points()), plane);
}

PointCloud apply_transform(const RigidTransform& t, const PointCloud& cloud) {
  std::vector<Vec3> out;
  out.reserve(cloud.size());
  for (const auto& p : cloud.points()) out.push_back(t.apply(p));
  return PointCloud(std::move(out), cloud.visibility());
}

}  // namespace sherdreg
