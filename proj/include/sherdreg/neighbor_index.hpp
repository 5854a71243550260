#pragma once

#include "sherdreg/geometry.hpp"

#include <atomic>
#include <cstdint>
#include <span>
#include <vector>

namespace sherdreg {

struct Neighbor {
  std::size_t index = 0;
  double distance = 0.0;  // mm

  friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

/// Exact kd-tree over a fixed point set. Read-only after construction; all
/// queries are safe to run concurrently. Distance ties resolve to the lowest
/// point index, so results match a linear scan bit for bit.
class NeighborIndex {
 public:
  explicit NeighborIndex(std::vector<Vec3> points);
  explicit NeighborIndex(const PointCloud& cloud) : NeighborIndex(cloud.points()) {}

  NeighborIndex(const NeighborIndex&) = delete;
  NeighborIndex& operator=(const NeighborIndex&) = delete;

  std::size_t size() const noexcept { return points_.size(); }
  const Vec3& point(std::size_t i) const { return points_[i]; }

  Neighbor nearest(const Vec3& query) const;

  /// The k closest points ordered by (distance, index).
  std::vector<Neighbor> k_nearest(const Vec3& query, std::size_t k) const;

  /// All points within `radius` (inclusive) ordered by (distance, index).
  std::vector<Neighbor> within_radius(const Vec3& query, double radius) const;

  /// Number of queries answered so far (all kinds). Used to instrument
  /// callers that promise a bounded number of searches.
  std::uint64_t query_count() const noexcept { return queries_.load(std::memory_order_relaxed); }

 private:
  struct Node {
    // Leaf when split_dim < 0; then [begin, end) indexes into order_.
    int split_dim = -1;
    double split_value = 0.0;
    std::uint32_t begin = 0;
    std::uint32_t end = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);

  template <typename Visitor>
  void search(std::int32_t node, const Vec3& query, Visitor& visitor) const;

  std::vector<Vec3> points_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::int32_t root_ = -1;
  mutable std::atomic<std::uint64_t> queries_{0};
};

}  // namespace sherdreg
