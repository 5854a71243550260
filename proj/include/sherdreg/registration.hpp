#pragma once

#include "sherdreg/boundary.hpp"
#include "sherdreg/geometry.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace sherdreg {

/// A correspondence (source point, target point); the fitted transform maps
/// sources onto targets.
using PointPair = std::pair<Vec3, Vec3>;

/// Global least-squares rigid transform for paired points: centroids,
/// SVD of the cross-covariance, determinant correction so det R = +1.
/// Throws DegenerateCorrespondence for fewer than 3 pairs or rank < 2.
RigidTransform rigid_fit_svd(std::span<const PointPair> pairs);
RigidTransform rigid_fit_svd(std::span<const Vec3> source, std::span<const Vec3> target);

/// Sum of squared residuals |t(source) - target|^2.
double sum_squared_error(const RigidTransform& t, std::span<const PointPair> pairs);

struct BBICPConfig {
  int max_iterations = 100;
  double convergence_tol = 1e-6;  // relative change of the objective
  /// Pairs farther apart than this are dropped. Unset: no rejection in the
  /// first iteration, then 5x the median first-iteration pair distance.
  std::optional<double> correspondence_reject_distance;
  std::size_t min_correspondences = 10;

  void validate() const;
};

struct RegistrationResult {
  RigidTransform transform;  // maps the back (source) scan into the front (target) frame
  /// Objective at the start of each iteration: summed squared pair distances,
  /// where a rejected pair contributes the squared rejection distance.
  std::vector<double> objective_trace;
  std::vector<std::size_t> correspondence_counts;  // surviving pairs per iteration
  std::vector<std::uint64_t> nn_queries;           // nearest-neighbour searches per iteration
  int iterations_run = 0;
  bool converged = false;
  double final_rms = 0.0;  // mm, over the last surviving pairs after the last solve
  double reject_distance = 0.0;  // the rejection distance in force at the end (inf when disabled)
};

/// Bilateral boundary ICP. Each iteration pairs every front boundary point
/// with its closest point in the (transformed) back cloud and every
/// transformed back boundary point with its closest point in the front
/// cloud, drops pairs beyond the rejection distance, and solves the
/// closed-form rigid fit over both sets.
RegistrationResult bbicp(const PointCloud& front, const PointCloud& back, const BoundarySet& front_boundary,
                         const BoundarySet& back_boundary, const RigidTransform& init, const BBICPConfig& config = {});

/// Point-to-point ICP over every source point keeping only the
/// `trim_fraction` closest pairs per iteration.
RegistrationResult trimmed_icp(const PointCloud& source, const PointCloud& target, const RigidTransform& init,
                               double trim_fraction, const BBICPConfig& config = {});

}  // namespace sherdreg
