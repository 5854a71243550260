#include "sherdreg/neighbor_index.hpp"

#include "sherdreg/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

namespace sherdreg {
namespace {

constexpr std::uint32_t kLeafSize = 12;

struct Candidate {
  double d2;
  std::size_t index;
  bool operator<(const Candidate& o) const { return d2 < o.d2 || (d2 == o.d2 && index < o.index); }
};

struct NearestVisitor {
  Candidate best{std::numeric_limits<double>::infinity(), std::numeric_limits<std::size_t>::max()};
  double bound() const { return best.d2; }
  void offer(std::size_t i, double d2) {
    const Candidate c{d2, i};
    if (c < best) best = c;
  }
};

struct KnnVisitor {
  std::size_t k;
  std::priority_queue<Candidate> heap;  // max-heap on (d2, index)
  double bound() const {
    return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.top().d2;
  }
  void offer(std::size_t i, double d2) {
    const Candidate c{d2, i};
    if (heap.size() < k) {
      heap.push(c);
    } else if (c < heap.top()) {
      heap.pop();
      heap.push(c);
    }
  }
};

struct RadiusVisitor {
  double r2;
  std::vector<Candidate> found;
  double bound() const { return r2; }
  void offer(std::size_t i, double d2) {
    if (d2 <= r2) found.push_back({d2, i});
  }
};

std::vector<Neighbor> to_neighbors(std::vector<Candidate> c) {
  std::sort(c.begin(), c.end());
  std::vector<Neighbor> out;
  out.reserve(c.size());
  for (const auto& x : c) out.push_back({x.index, std::sqrt(x.d2)});
  return out;
}

}  // namespace

NeighborIndex::NeighborIndex(std::vector<Vec3> points) : points_(std::move(points)) {
  if (points_.empty()) throw Error(ErrorCode::EmptyCloud, "cannot index an empty point set");
  if (points_.size() >= std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::PreconditionViolation, "point set too large for the index");
  }
  order_.resize(points_.size());
  std::iota(order_.begin(), order_.end(), 0u);
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  root_ = build(0, static_cast<std::uint32_t>(points_.size()));
}

std::int32_t NeighborIndex::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back({});
  if (end - begin <= kLeafSize) {
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  Vec3 lo = Vec3::Constant(std::numeric_limits<double>::infinity());
  Vec3 hi = -lo;
  for (auto i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  Eigen::Index dim = 0;
  (hi - lo).maxCoeff(&dim);
  if (hi(dim) == lo(dim)) {
    // All remaining points coincide.
    nodes_[id].begin = begin;
    nodes_[id].end = end;
    return id;
  }

  const auto mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return points_[a](dim) < points_[b](dim); });
  const double split = points_[order_[mid]](dim);

  const auto left = build(begin, mid);
  const auto right = build(mid, end);
  nodes_[id].split_dim = static_cast<int>(dim);
  nodes_[id].split_value = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

template <typename Visitor>
void NeighborIndex::search(std::int32_t node_id, const Vec3& query, Visitor& visitor) const {
  const Node& node = nodes_[node_id];
  if (node.split_dim < 0) {
    for (auto i = node.begin; i < node.end; ++i) {
      const std::size_t idx = order_[i];
      visitor.offer(idx, (points_[idx] - query).squaredNorm());
    }
    return;
  }
  const double diff = query(node.split_dim) - node.split_value;
  const auto near = diff < 0.0 ? node.left : node.right;
  const auto far = diff < 0.0 ? node.right : node.left;
  search(near, query, visitor);
  // Equality keeps equidistant points with lower indices reachable.
  if (diff * diff <= visitor.bound()) search(far, query, visitor);
}

Neighbor NeighborIndex::nearest(const Vec3& query) const {
  queries_.fetch_add(1, std::memory_order_relaxed);
  NearestVisitor v;
  search(root_, query, v);
  return {v.best.index, std::sqrt(v.best.d2)};
}

std::vector<Neighbor> NeighborIndex::k_nearest(const Vec3& query, std::size_t k) const {
  queries_.fetch_add(1, std::memory_order_relaxed);
  if (k == 0) return {};
  KnnVisitor v{std::min(k, points_.size()), {}};
  search(root_, query, v);
  std::vector<Candidate> c;
  c.reserve(v.heap.size());
  while (!v.heap.empty()) {
    c.push_back(v.heap.top());
    v.heap.pop();
  }
  return to_neighbors(std::move(c));
}

std::vector<Neighbor> NeighborIndex::within_radius(const Vec3& query, double radius) const {
  queries_.fetch_add(1, std::memory_order_relaxed);
  RadiusVisitor v{radius * radius, {}};
  search(root_, query, v);
  return to_neighbors(std::move(v.found));
}

}  // namespace sherdreg
