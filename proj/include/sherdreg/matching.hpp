#pragma once

#include "sherdreg/contour.hpp"
#include "sherdreg/geometry.hpp"

#include <Eigen/Core>

#include <span>
#include <vector>

namespace sherdreg {

struct DescriptorDistanceResult {
  double distance = 0.0;  // radians, L2 over the accumulated-angle vector
  std::size_t best_shift = 0;
  bool mirrored = false;
};

/// Minimum L2 distance between the front descriptor (start fixed at its
/// vertex 0) and the back descriptor over every cyclic start shift, for both
/// the back contour as given and its reflection. Ties go to the smaller
/// shift, then to the unreflected candidate.
DescriptorDistanceResult descriptor_distance(const ShapeDescriptor& front, const ShapeDescriptor& back);

/// Distance of one (shift, mirror) candidate.
double descriptor_distance_at(const ShapeDescriptor& front, const ShapeDescriptor& back, std::size_t shift,
                              bool mirror);

struct MatchedPair {
  std::size_t front = 0;
  std::size_t back = 0;
  DescriptorDistanceResult match;
  bool ambiguous = false;
};

struct BatchAssignment {
  std::vector<MatchedPair> pairs;  // ordered by front index
  Eigen::MatrixXd distances;       // front x back
};

inline constexpr double kAmbiguityMargin = 0.10;

/// Full distance matrix, then the minimum-total-cost perfect assignment. A
/// pair is ambiguous when the runner-up in its row is within 10% of the
/// chosen distance.
BatchAssignment match_batches(std::span<const ShapeDescriptor> front, std::span<const ShapeDescriptor> back);

/// Back contour index paired with front vertex i.
std::size_t corresponding_index(std::size_t i, std::size_t shift, bool mirrored, std::size_t n);

/// Rigid transform taking the back 3D contour onto the front 3D contour under
/// the correspondence v_i <-> u_(shift + i) (after index reversal when
/// mirrored). Throws DegenerateCorrespondence on collinear contours.
RigidTransform initial_alignment(std::span<const Vec3> front_contour_3d, std::span<const Vec3> back_contour_3d,
                                 std::size_t shift, bool mirrored);

}  // namespace sherdreg
