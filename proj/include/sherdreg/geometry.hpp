#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <span>
#include <vector>

namespace sherdreg {

// All lengths are millimetres.
using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

/// Ordered set of 3D points. Point order is stable, so indices are handles
/// that stay valid across every operation in the library. Optional per-point
/// visibility lists hold the indices of the camera views that observed the
/// point.
class PointCloud {
 public:
  PointCloud() = default;
  explicit PointCloud(std::vector<Vec3> points, std::vector<std::vector<int>> visibility = {});

  const std::vector<Vec3>& points() const noexcept { return points_; }
  const Vec3& operator[](std::size_t i) const { return points_[i]; }
  std::size_t size() const noexcept { return points_.size(); }
  bool empty() const noexcept { return points_.empty(); }

  bool has_visibility() const noexcept { return !visibility_.empty(); }
  const std::vector<std::vector<int>>& visibility() const noexcept { return visibility_; }

  Vec3 centroid() const;

 private:
  std::vector<Vec3> points_;
  std::vector<std::vector<int>> visibility_;
};

/// Proper rigid motion p -> R p + t.
struct RigidTransform {
  Mat3 rotation = Mat3::Identity();
  Vec3 translation = Vec3::Zero();

  static RigidTransform identity() { return {}; }

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
  Vec3 operator()(const Vec3& p) const { return apply(p); }

  RigidTransform inverse() const;

  /// (a * b)(p) == a(b(p))
  friend RigidTransform operator*(const RigidTransform& a, const RigidTransform& b);

  /// True when R^T R = I and det R = +1 within `tol`.
  bool is_proper(double tol = 1e-9) const;

  Eigen::Matrix4d matrix() const;
};

RigidTransform from_axis_angle(const Vec3& axis, double angle_rad, const Vec3& translation = Vec3::Zero());

/// Geodesic angle between two rotations, in radians.
double rotation_angle_between(const Mat3& a, const Mat3& b);

struct Plane {
  Vec3 centroid = Vec3::Zero();
  Vec3 normal = Vec3::UnitZ();
  Vec3 basis_u = Vec3::UnitX();
  Vec3 basis_v = Vec3::UnitY();

  Vec3 lift(const Vec2& q) const { return centroid + q.x() * basis_u + q.y() * basis_v; }
  double signed_distance(const Vec3& p) const { return normal.dot(p - centroid); }
};

/// Least-squares plane through the centroid; the normal is the covariance
/// eigenvector of the smallest eigenvalue with its largest-magnitude
/// component made positive. Throws DegenerateCloud below rank 2.
Plane fit_plane_pca(const PointCloud& cloud);
Plane fit_plane_pca(std::span<const Vec3> points);

/// Right-handed in-plane basis (u x v = normal) derived deterministically
/// from a unit normal.
void complete_basis(const Vec3& normal, Vec3& basis_u, Vec3& basis_v);

std::vector<Vec2> project_to_plane(const PointCloud& cloud, const Plane& plane);
std::vector<Vec2> project_to_plane(std::span<const Vec3> points, const Plane& plane);

PointCloud apply_transform(const RigidTransform& t, const PointCloud& cloud);

}  // namespace sherdreg
