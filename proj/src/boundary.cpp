#include "sherdreg/boundary.hpp"

#include "sherdreg/errors.hpp"
#include "sherdreg/neighbor_index.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <numeric>

namespace sherdreg {

BoundarySet BoundarySet::from_unsorted(std::vector<std::size_t> indices) {
  std::sort(indices.begin(), indices.end());
  indices.erase(std::unique(indices.begin(), indices.end()), indices.end());
  return BoundarySet{std::move(indices)};
}

std::vector<Vec2> mask_contour_pixels(const Mask& mask) {
  std::vector<Vec2> out;
  for (int y = 0; y < mask.height; ++y) {
    for (int x = 0; x < mask.width; ++x) {
      if (!mask.at(x, y)) continue;
      const bool edge = x == 0 || y == 0 || x == mask.width - 1 || y == mask.height - 1 || !mask.at(x - 1, y) ||
                        !mask.at(x + 1, y) || !mask.at(x, y - 1) || !mask.at(x, y + 1);
      if (edge) out.emplace_back(x, y);
    }
  }
  return out;
}

CameraView::CameraView(Mat3 k, RigidTransform world_to_camera, Mask m)
    : intrinsics(std::move(k)), pose(std::move(world_to_camera)), mask(std::move(m)) {
  if (!(intrinsics(0, 0) > 0.0 && intrinsics(1, 1) > 0.0)) {
    throw Error(ErrorCode::PreconditionViolation, "camera focal lengths must be positive");
  }
  if (mask.width <= 0 || mask.height <= 0 ||
      mask.pixels.size() != static_cast<std::size_t>(mask.width) * static_cast<std::size_t>(mask.height)) {
    throw Error(ErrorCode::PreconditionViolation, "mask dimensions do not match its pixel buffer");
  }
  mask_contour = mask_contour_pixels(mask);
  if (mask_contour.empty()) throw Error(ErrorCode::PreconditionViolation, "mask is empty");
}

bool CameraView::project(const Vec3& world, Vec2& pixel) const {
  const Vec3 c = pose.apply(world);
  if (!(c.z() > 0.0)) return false;
  const Vec3 h = intrinsics * c;
  pixel = Vec2(h.x() / h.z(), h.y() / h.z());
  return true;
}

std::vector<std::size_t> mask_candidate_filter(const PointCloud& cloud, std::span<const CameraView> views,
                                               double pixel_threshold) {
  if (views.empty()) throw Error(ErrorCode::NoViews, "no camera views supplied");
  require(pixel_threshold > 0.0, "pixel threshold must be positive");

  std::vector<std::unique_ptr<NeighborIndex>> contour_index;
  contour_index.reserve(views.size());
  for (const auto& v : views) {
    std::vector<Vec3> pts;
    pts.reserve(v.mask_contour.size());
    for (const auto& p : v.mask_contour) pts.emplace_back(p.x(), p.y(), 0.0);
    contour_index.push_back(std::make_unique<NeighborIndex>(std::move(pts)));
  }

  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    if (!cloud.has_visibility() || cloud.visibility()[i].empty()) continue;
    bool candidate = true;
    for (int view : cloud.visibility()[i]) {
      if (view < 0 || static_cast<std::size_t>(view) >= views.size()) {
        throw Error(ErrorCode::PreconditionViolation, "visibility list references an unknown view");
      }
      Vec2 px;
      if (!views[view].project(cloud[i], px) ||
          contour_index[view]->nearest(Vec3(px.x(), px.y(), 0.0)).distance >= pixel_threshold) {
        candidate = false;
        break;
      }
    }
    if (candidate) out.push_back(i);
  }
  return out;
}

namespace {

double gap_from_neighbours(const PointCloud& cloud, std::size_t index, std::span<const std::size_t> neighbours) {
  const Vec3& p = cloud[index];
  Vec3 mean = p;
  for (auto j : neighbours) mean += cloud[j];
  mean /= static_cast<double>(neighbours.size() + 1);
  Mat3 cov = (p - mean) * (p - mean).transpose();
  for (auto j : neighbours) cov.noalias() += (cloud[j] - mean) * (cloud[j] - mean).transpose();

  Eigen::SelfAdjointEigenSolver<Mat3> eig(cov);
  const Vec3 u = eig.eigenvectors().col(2);
  const Vec3 v = eig.eigenvectors().col(1);

  std::vector<double> angles;
  angles.reserve(neighbours.size());
  for (auto j : neighbours) {
    const Vec3 d = cloud[j] - p;
    const double x = d.dot(u);
    const double y = d.dot(v);
    if (x * x + y * y <= 1e-24) continue;
    angles.push_back(std::atan2(y, x));
  }
  if (angles.size() < 2) return 2.0 * std::numbers::pi;
  std::sort(angles.begin(), angles.end());
  double widest = angles.front() + 2.0 * std::numbers::pi - angles.back();
  for (std::size_t i = 1; i < angles.size(); ++i) widest = std::max(widest, angles[i] - angles[i - 1]);
  return widest;
}

}  // namespace

double largest_angular_gap(const PointCloud& cloud, std::size_t index, std::span<const std::size_t> neighbours) {
  require(index < cloud.size(), "point index out of range");
  return gap_from_neighbours(cloud, index, neighbours);
}

BoundarySet extract_boundary(const PointCloud& cloud, std::span<const std::size_t> candidates, std::size_t k,
                             double gap_threshold) {
  require(!candidates.empty(), "boundary extraction needs candidates");
  require(k >= 4, "boundary extraction needs k >= 4");
  if (cloud.size() < k + 1) {
    throw Error(ErrorCode::TooFewNeighbors, "cloud has fewer than k + 1 points");
  }

  const NeighborIndex index(cloud);
  std::vector<std::size_t> out;
  std::vector<std::size_t> neighbours;
  for (auto c : candidates) {
    require(c < cloud.size(), "candidate index out of range");
    const auto nn = index.k_nearest(cloud[c], k + 1);
    neighbours.clear();
    for (const auto& n : nn) {
      if (n.index != c && neighbours.size() < k) neighbours.push_back(n.index);
    }
    if (gap_from_neighbours(cloud, c, neighbours) > gap_threshold) out.push_back(c);
  }
  return BoundarySet::from_unsorted(std::move(out));
}

BoundarySet extract_boundary(const PointCloud& cloud, const BoundaryConfig& config) {
  std::vector<std::size_t> all(cloud.size());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return extract_boundary(cloud, all, config.k, config.gap_threshold);
}

}  // namespace sherdreg
