#include "sherdreg/matching.hpp"

#include "sherdreg/assignment.hpp"
#include "sherdreg/errors.hpp"
#include "sherdreg/registration.hpp"

#include <cmath>
#include <limits>

namespace sherdreg {

double descriptor_distance_at(const ShapeDescriptor& front, const ShapeDescriptor& back, std::size_t shift,
                              bool mirror) {
  const std::size_t n = front.size();
  if (back.size() != n) throw Error(ErrorCode::LengthMismatch, "descriptors differ in length");
  require(shift < n, "shift out of range");
  double running = 0.0;
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (shift + i) % n;
    running += mirror ? back.turning[(n - j) % n] : back.turning[j];
    const double diff = front.theta_bar[i] - running;
    sum_sq += diff * diff;
  }
  return std::sqrt(sum_sq);
}

DescriptorDistanceResult descriptor_distance(const ShapeDescriptor& front, const ShapeDescriptor& back) {
  if (back.size() != front.size()) throw Error(ErrorCode::LengthMismatch, "descriptors differ in length");
  require(front.size() > 0, "empty descriptor");
  DescriptorDistanceResult best{std::numeric_limits<double>::infinity(), 0, false};
  for (std::size_t k = 0; k < front.size(); ++k) {
    for (bool mirror : {false, true}) {
      const double d = descriptor_distance_at(front, back, k, mirror);
      if (d < best.distance) best = {d, k, mirror};
    }
  }
  return best;
}

BatchAssignment match_batches(std::span<const ShapeDescriptor> front, std::span<const ShapeDescriptor> back) {
  if (front.size() != back.size()) throw Error(ErrorCode::SizeMismatch, "front and back batches differ in size");
  if (front.empty()) throw Error(ErrorCode::SizeMismatch, "batches are empty");
  const std::size_t n = front.size();

  std::vector<std::vector<DescriptorDistanceResult>> results(n, std::vector<DescriptorDistanceResult>(n));
  BatchAssignment out;
  out.distances.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      results[i][j] = descriptor_distance(front[i], back[j]);
      out.distances(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = results[i][j].distance;
    }
  }

  const std::vector<int> column = solve_assignment(out.distances);
  for (std::size_t i = 0; i < n; ++i) {
    const auto j = static_cast<std::size_t>(column[i]);
    MatchedPair pair{i, j, results[i][j], false};
    double runner_up = std::numeric_limits<double>::infinity();
    for (std::size_t other = 0; other < n; ++other) {
      if (other != j) runner_up = std::min(runner_up, results[i][other].distance);
    }
    pair.ambiguous = runner_up <= (1.0 + kAmbiguityMargin) * pair.match.distance;
    out.pairs.push_back(pair);
  }
  return out;
}

std::size_t corresponding_index(std::size_t i, std::size_t shift, bool mirrored, std::size_t n) {
  const std::size_t j = (shift + i) % n;
  return mirrored ? (n - j) % n : j;
}

RigidTransform initial_alignment(std::span<const Vec3> front_contour_3d, std::span<const Vec3> back_contour_3d,
                                 std::size_t shift, bool mirrored) {
  const std::size_t n = front_contour_3d.size();
  if (back_contour_3d.size() != n) throw Error(ErrorCode::LengthMismatch, "3D contours differ in length");
  require(n > 0 && shift < n, "shift out of range");
  std::vector<PointPair> pairs;
  pairs.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    pairs.emplace_back(back_contour_3d[corresponding_index(i, shift, mirrored, n)], front_contour_3d[i]);
  }
  return rigid_fit_svd(pairs);
}

}  // namespace sherdreg
