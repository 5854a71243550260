#pragma once

#include "sherdreg/geometry.hpp"

#include <cstdint>
#include <numbers>
#include <span>
#include <vector>

namespace sherdreg {

/// Sorted, unique indices into a parent PointCloud.
struct BoundarySet {
  std::vector<std::size_t> indices;

  static BoundarySet from_unsorted(std::vector<std::size_t> indices);
  std::size_t size() const noexcept { return indices.size(); }
  bool empty() const noexcept { return indices.empty(); }
};

struct BoundaryConfig {
  std::size_t k = 16;
  double gap_threshold = 2.0 * std::numbers::pi / 3.0;  // radians
  double pixel_threshold = 3.0;                        // pixels
};

/// Binary segmentation mask; pixel (x, y) is stored at y * width + x and its
/// centre sits at image coordinate (x, y).
struct Mask {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> pixels;  // nonzero = fragment

  bool at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x] != 0; }
};

/// Mask pixels that are set and touch an unset 4-neighbour or the image edge.
std::vector<Vec2> mask_contour_pixels(const Mask& mask);

/// Pinhole camera with its segmentation mask.
struct CameraView {
  CameraView(Mat3 intrinsics, RigidTransform world_to_camera, Mask mask);

  Mat3 intrinsics;
  RigidTransform pose;  // world -> camera
  Mask mask;
  std::vector<Vec2> mask_contour;

  /// Pixel coordinates of a world point; false when it lies behind the camera.
  bool project(const Vec3& world, Vec2& pixel) const;
};

/// Points whose projection lies within `pixel_threshold` (strictly) of the
/// mask contour in every view that sees them. Points seen by no view are
/// excluded. Throws NoViews when `views` is empty.
std::vector<std::size_t> mask_candidate_filter(const PointCloud& cloud, std::span<const CameraView> views,
                                               double pixel_threshold);

/// Angular-gap boundary test: a candidate is a boundary point when, after
/// projecting its k nearest neighbours onto the local PCA tangent plane and
/// sorting them by polar angle, the widest gap exceeds `gap_threshold`.
BoundarySet extract_boundary(const PointCloud& cloud, std::span<const std::size_t> candidates, std::size_t k,
                             double gap_threshold);

/// Geometric-only extraction over every point of the cloud.
BoundarySet extract_boundary(const PointCloud& cloud, const BoundaryConfig& config = {});

/// Widest angular gap (radians) around point `index` given its neighbours.
double largest_angular_gap(const PointCloud& cloud, std::size_t index, std::span<const std::size_t> neighbours);

}  // namespace sherdreg
