#include "sherdreg/registration.hpp"

#include "sherdreg/errors.hpp"
#include "sherdreg/neighbor_index.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sherdreg {

RigidTransform rigid_fit_svd(std::span<const PointPair> pairs) {
  if (pairs.size() < 3) throw Error(ErrorCode::DegenerateCorrespondence, "rigid fit needs at least 3 pairs");

  Vec3 cs = Vec3::Zero(), ct = Vec3::Zero();
  for (const auto& [s, t] : pairs) {
    cs += s;
    ct += t;
  }
  const double n = static_cast<double>(pairs.size());
  cs /= n;
  ct /= n;

  Mat3 h = Mat3::Zero();
  Mat3 scatter = Mat3::Zero();
  for (const auto& [s, t] : pairs) {
    const Vec3 ds = s - cs;
    h.noalias() += ds * (t - ct).transpose();
    scatter.noalias() += ds * ds.transpose();
  }
  if (!h.allFinite()) throw Error(ErrorCode::DegenerateCorrespondence, "non-finite correspondence");

  const Vec3 spread = Eigen::SelfAdjointEigenSolver<Mat3>(scatter, Eigen::EigenvaluesOnly).eigenvalues();
  Eigen::JacobiSVD<Mat3> svd(h, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec3 sigma = svd.singularValues();
  if (!(spread(2) > 0.0) || spread(1) <= 1e-12 * spread(2) || !(sigma(0) > 0.0) || sigma(1) <= 1e-12 * sigma(0)) {
    throw Error(ErrorCode::DegenerateCorrespondence, "correspondences are collinear (cross-covariance rank < 2)");
  }

  const Mat3 u = svd.matrixU();
  const Mat3 v = svd.matrixV();
  Mat3 d = Mat3::Identity();
  // Reflection guard: flip the least significant singular direction.
  if ((v * u.transpose()).determinant() < 0.0) d(2, 2) = -1.0;

  RigidTransform out;
  out.rotation = v * d * u.transpose();
  out.translation = ct - out.rotation * cs;
  return out;
}

RigidTransform rigid_fit_svd(std::span<const Vec3> source, std::span<const Vec3> target) {
  if (source.size() != target.size()) throw Error(ErrorCode::LengthMismatch, "source and target sizes differ");
  std::vector<PointPair> pairs;
  pairs.reserve(source.size());
  for (std::size_t i = 0; i < source.size(); ++i) pairs.emplace_back(source[i], target[i]);
  return rigid_fit_svd(pairs);
}

double sum_squared_error(const RigidTransform& t, std::span<const PointPair> pairs) {
  double sum = 0.0;
  for (const auto& [s, d] : pairs) sum += (t.apply(s) - d).squaredNorm();
  return sum;
}

void BBICPConfig::validate() const {
  require(max_iterations >= 1, "max_iterations must be >= 1");
  require(convergence_tol > 0.0, "convergence_tol must be positive");
  require(!correspondence_reject_distance || *correspondence_reject_distance > 0.0,
          "correspondence_reject_distance must be positive");
}

namespace {

double median_of(std::vector<double> v) {
  const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
  std::nth_element(v.begin(), mid, v.end());
  return *mid;
}

bool relative_change_below(double previous, double current, double tol) {
  if (previous <= 0.0) return current <= 0.0;
  return std::abs(previous - current) / previous < tol;
}

// Objective is at or below the floating-point noise floor of the pair set.
bool objective_vanished(double objective, std::size_t pairs) {
  return objective <= 1e-24 * static_cast<double>(std::max<std::size_t>(pairs, 1));
}

}  // namespace

RegistrationResult bbicp(const PointCloud& front, const PointCloud& back, const BoundarySet& front_boundary,
                         const BoundarySet& back_boundary, const RigidTransform& init, const BBICPConfig& config) {
  config.validate();
  require(!front.empty() && !back.empty(), "bbicp needs non-empty clouds");
  require(init.is_proper(1e-6), "initial transform is not a proper rigid motion");
  for (auto i : front_boundary.indices) require(i < front.size(), "front boundary index out of range");
  for (auto i : back_boundary.indices) require(i < back.size(), "back boundary index out of range");

  const NeighborIndex front_index(front);
  const NeighborIndex back_index(back);

  constexpr double inf = std::numeric_limits<double>::infinity();
  const bool auto_reject = !config.correspondence_reject_distance.has_value();
  double reject = auto_reject ? inf : *config.correspondence_reject_distance;

  RegistrationResult result;
  result.transform = init;
  std::vector<PointPair> pairs;
  std::vector<double> dist;
  std::vector<PointPair> kept;
  double previous = inf;

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    const RigidTransform& x = result.transform;
    const RigidTransform x_inv = x.inverse();
    const auto queries_before = front_index.query_count() + back_index.query_count();

    pairs.clear();
    dist.clear();
    // K1: front boundary -> closest point of the transformed back cloud.
    for (auto i : front_boundary.indices) {
      const Vec3& b = front[i];
      const Neighbor nn = back_index.nearest(x_inv.apply(b));
      pairs.emplace_back(back[nn.index], b);
      dist.push_back((x.apply(back[nn.index]) - b).norm());
    }
    // K2: transformed back boundary -> closest point of the front cloud.
    for (auto j : back_boundary.indices) {
      const Vec3& b = back[j];
      const Neighbor nn = front_index.nearest(x.apply(b));
      pairs.emplace_back(b, front[nn.index]);
      dist.push_back(nn.distance);
    }
    result.nn_queries.push_back(front_index.query_count() + back_index.query_count() - queries_before);

    kept.clear();
    double objective = 0.0;
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      if (dist[p] <= reject) {
        kept.push_back(pairs[p]);
        objective += dist[p] * dist[p];
      } else {
        objective += reject * reject;
      }
    }
    if (!std::isfinite(objective)) throw Error(ErrorCode::NonFiniteObjective, "objective is not finite");
    if (kept.size() < config.min_correspondences) {
      throw Error(ErrorCode::InsufficientCorrespondences,
                  std::to_string(kept.size()) + " correspondences survive, need " +
                      std::to_string(config.min_correspondences));
    }
    result.objective_trace.push_back(objective);
    result.correspondence_counts.push_back(kept.size());

    result.transform = rigid_fit_svd(kept);
    result.final_rms = std::sqrt(sum_squared_error(result.transform, kept) / static_cast<double>(kept.size()));
    result.iterations_run = iter;

    const bool done = objective_vanished(objective, pairs.size()) ||
                      (iter >= 2 && relative_change_below(previous, objective, config.convergence_tol));
    previous = objective;
    if (auto_reject && iter == 1) reject = std::max(5.0 * median_of(dist), 1e-6);
    if (done) {
      result.converged = true;
      break;
    }
  }
  result.reject_distance = reject;
  return result;
}

RegistrationResult trimmed_icp(const PointCloud& source, const PointCloud& target, const RigidTransform& init,
                               double trim_fraction, const BBICPConfig& config) {
  config.validate();
  require(trim_fraction > 0.0 && trim_fraction <= 1.0, "trim_fraction must lie in (0, 1]");
  require(!source.empty() && !target.empty(), "trimmed ICP needs non-empty clouds");

  const NeighborIndex target_index(target);
  const std::size_t keep = static_cast<std::size_t>(std::ceil(trim_fraction * static_cast<double>(source.size())));

  RegistrationResult result;
  result.transform = init;
  result.reject_distance = std::numeric_limits<double>::infinity();
  std::vector<std::pair<double, std::size_t>> ranked(source.size());
  std::vector<std::size_t> match(source.size());
  std::vector<PointPair> kept;
  double previous = std::numeric_limits<double>::infinity();

  for (int iter = 1; iter <= config.max_iterations; ++iter) {
    const auto queries_before = target_index.query_count();
    for (std::size_t i = 0; i < source.size(); ++i) {
      const Neighbor nn = target_index.nearest(result.transform.apply(source[i]));
      ranked[i] = {nn.distance, i};
      match[i] = nn.index;
    }
    result.nn_queries.push_back(target_index.query_count() - queries_before);
    std::partial_sort(ranked.begin(), ranked.begin() + static_cast<std::ptrdiff_t>(keep), ranked.end());

    kept.clear();
    double objective = 0.0;
    for (std::size_t r = 0; r < keep; ++r) {
      const auto [d, i] = ranked[r];
      kept.emplace_back(source[i], target[match[i]]);
      objective += d * d;
    }
    if (!std::isfinite(objective)) throw Error(ErrorCode::NonFiniteObjective, "objective is not finite");
    if (kept.size() < config.min_correspondences) {
      throw Error(ErrorCode::InsufficientCorrespondences, "too few points kept after trimming");
    }
    result.objective_trace.push_back(objective);
    result.correspondence_counts.push_back(kept.size());

    result.transform = rigid_fit_svd(kept);
    result.final_rms = std::sqrt(sum_squared_error(result.transform, kept) / static_cast<double>(kept.size()));
    result.iterations_run = iter;

    const bool done = objective_vanished(objective, kept.size()) ||
                      (iter >= 2 && relative_change_below(previous, objective, config.convergence_tol));
    previous = objective;
    if (done) {
      result.converged = true;
      break;
    }
  }
  return result;
}

}  // namespace sherdreg
