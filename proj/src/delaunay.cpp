#include "sherdreg/delaunay.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numeric>

namespace sherdreg {
namespace {

// Orientation determinant with a cheap error filter; when the filtered value
// is inconclusive the determinant is recomputed from the other two vertices
// before giving up and reporting zero.
double orient_if_sure(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double l = (b.y() - a.y()) * (c.x() - a.x());
  const double r = (b.x() - a.x()) * (c.y() - a.y());
  return std::abs(l - r) >= 3.3306690738754716e-16 * std::abs(l + r) ? r - l : 0.0;
}

/// Positive for counter-clockwise (a, b, c).
double orient(const Vec2& a, const Vec2& b, const Vec2& c) {
  double s = orient_if_sure(a, b, c);
  if (s == 0.0) s = orient_if_sure(b, c, a);
  if (s == 0.0) s = orient_if_sure(c, a, b);
  return s;
}

/// True when p lies strictly inside the circumcircle of counter-clockwise (a, b, c).
bool in_circle(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& p) {
  const double dx = a.x() - p.x(), dy = a.y() - p.y();
  const double ex = b.x() - p.x(), ey = b.y() - p.y();
  const double fx = c.x() - p.x(), fy = c.y() - p.y();
  const double ap = dx * dx + dy * dy;
  const double bp = ex * ex + ey * ey;
  const double cp = fx * fx + fy * fy;
  return dx * (ey * cp - bp * fy) - dy * (ex * cp - bp * fx) + ap * (ex * fy - ey * fx) > 0.0;
}

double circumradius_sq(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double dx = b.x() - a.x(), dy = b.y() - a.y();
  const double ex = c.x() - a.x(), ey = c.y() - a.y();
  const double bl = dx * dx + dy * dy;
  const double cl = ex * ex + ey * ey;
  const double den = dx * ey - dy * ex;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  const double d = 0.5 / den;
  const double x = (ey * bl - dy * cl) * d;
  const double y = (dx * cl - ex * bl) * d;
  const double r2 = x * x + y * y;
  return std::isfinite(r2) ? r2 : std::numeric_limits<double>::infinity();
}

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double dx = b.x() - a.x(), dy = b.y() - a.y();
  const double ex = c.x() - a.x(), ey = c.y() - a.y();
  const double bl = dx * dx + dy * dy;
  const double cl = ex * ex + ey * ey;
  const double d = 0.5 / (dx * ey - dy * ex);
  return {a.x() + (ey * bl - dy * cl) * d, a.y() + (dx * cl - ex * bl) * d};
}

double pseudo_angle(double dx, double dy) {
  const double p = dx / (std::abs(dx) + std::abs(dy));
  return (dy > 0.0 ? 3.0 - p : 1.0 + p) / 4.0;
}

class Builder {
 public:
  explicit Builder(std::span<const Vec2> pts) : p_(pts) {}

  Triangulation run();

 private:
  std::size_t hash_key(const Vec2& q) const {
    const double a = pseudo_angle(q.x() - center_.x(), q.y() - center_.y());
    return static_cast<std::size_t>(std::floor(a * static_cast<double>(hash_size_))) % hash_size_;
  }

  void link(std::int32_t a, std::int32_t b) {
    halfedges_[a] = b;
    if (b != -1) halfedges_[b] = a;
  }

  std::int32_t add_triangle(std::int32_t i0, std::int32_t i1, std::int32_t i2, std::int32_t a, std::int32_t b,
                            std::int32_t c) {
    const auto t = static_cast<std::int32_t>(triangles_.size());
    triangles_.insert(triangles_.end(), {i0, i1, i2});
    halfedges_.insert(halfedges_.end(), {-1, -1, -1});
    link(t, a);
    link(t + 1, b);
    link(t + 2, c);
    return t;
  }

  std::int32_t legalize(std::int32_t a);

  std::span<const Vec2> p_;
  std::vector<std::int32_t> triangles_;
  std::vector<std::int32_t> halfedges_;
  std::vector<std::int32_t> hull_prev_, hull_next_, hull_tri_, hull_hash_;
  std::vector<std::int32_t> edge_stack_;
  std::int32_t hull_start_ = 0;
  std::size_t hash_size_ = 1;
  Vec2 center_ = Vec2::Zero();
};

std::int32_t Builder::legalize(std::int32_t a) {
  std::int32_t ar = 0;
  edge_stack_.clear();
  while (true) {
    const std::int32_t b = halfedges_[a];
    const std::int32_t a0 = a - a % 3;
    ar = a0 + (a + 2) % 3;

    if (b == -1) {
      if (edge_stack_.empty()) break;
      a = edge_stack_.back();
      edge_stack_.pop_back();
      continue;
    }

    const std::int32_t b0 = b - b % 3;
    const std::int32_t al = a0 + (a + 1) % 3;
    const std::int32_t bl = b0 + (b + 2) % 3;

    const std::int32_t p0 = triangles_[ar];
    const std::int32_t pr = triangles_[a];
    const std::int32_t pl = triangles_[al];
    const std::int32_t p1 = triangles_[bl];

    if (in_circle(p_[p0], p_[pr], p_[pl], p_[p1])) {
      triangles_[a] = p1;
      triangles_[b] = p0;
      const std::int32_t hbl = halfedges_[bl];
      if (hbl == -1) {
        // The flipped edge was on the hull; repoint the hull triangle reference.
        std::int32_t e = hull_start_;
        do {
          if (hull_tri_[e] == bl) {
            hull_tri_[e] = a;
            break;
          }
          e = hull_prev_[e];
        } while (e != hull_start_);
      }
      link(a, hbl);
      link(b, halfedges_[ar]);
      link(ar, bl);
      const std::int32_t br = b0 + (b + 1) % 3;
      if (edge_stack_.size() < 4096) edge_stack_.push_back(br);
    } else {
      if (edge_stack_.empty()) break;
      a = edge_stack_.back();
      edge_stack_.pop_back();
    }
  }
  return ar;
}

Triangulation Builder::run() {
  const auto n = static_cast<std::int32_t>(p_.size());
  if (n < 3) return {};

  Vec2 lo = p_[0], hi = p_[0];
  for (const auto& q : p_) {
    lo = lo.cwiseMin(q);
    hi = hi.cwiseMax(q);
  }
  const Vec2 mid = 0.5 * (lo + hi);

  std::int32_t i0 = -1, i1 = -1, i2 = -1;
  double best = std::numeric_limits<double>::infinity();
  for (std::int32_t i = 0; i < n; ++i) {
    const double d = (p_[i] - mid).squaredNorm();
    if (d < best) {
      best = d;
      i0 = i;
    }
  }
  best = std::numeric_limits<double>::infinity();
  for (std::int32_t i = 0; i < n; ++i) {
    if (i == i0) continue;
    const double d = (p_[i] - p_[i0]).squaredNorm();
    if (d < best && d > 0.0) {
      best = d;
      i1 = i;
    }
  }
  if (i1 < 0) return {};
  double min_radius = std::numeric_limits<double>::infinity();
  for (std::int32_t i = 0; i < n; ++i) {
    if (i == i0 || i == i1) continue;
    const double r = circumradius_sq(p_[i0], p_[i1], p_[i]);
    if (r < min_radius) {
      min_radius = r;
      i2 = i;
    }
  }
  if (!std::isfinite(min_radius)) return {};  // all collinear

  if (orient(p_[i0], p_[i1], p_[i2]) < 0.0) std::swap(i1, i2);
  center_ = circumcenter(p_[i0], p_[i1], p_[i2]);

  std::vector<double> dists(n);
  for (std::int32_t i = 0; i < n; ++i) dists[i] = (p_[i] - center_).squaredNorm();
  std::vector<std::int32_t> ids(n);
  std::iota(ids.begin(), ids.end(), 0);
  std::sort(ids.begin(), ids.end(), [&](std::int32_t a, std::int32_t b) {
    return dists[a] < dists[b] || (dists[a] == dists[b] && a < b);
  });

  hash_size_ = static_cast<std::size_t>(std::ceil(std::sqrt(static_cast<double>(n))));
  hull_prev_.assign(n, 0);
  hull_next_.assign(n, 0);
  hull_tri_.assign(n, 0);
  hull_hash_.assign(hash_size_, -1);
  triangles_.reserve(static_cast<std::size_t>(std::max(2 * n - 5, 1)) * 3);
  halfedges_.reserve(triangles_.capacity());

  // Hull is kept counter-clockwise; every triangle is counter-clockwise.
  hull_start_ = i0;
  hull_next_[i0] = hull_prev_[i2] = i1;
  hull_next_[i1] = hull_prev_[i0] = i2;
  hull_next_[i2] = hull_prev_[i1] = i0;
  hull_tri_[i0] = 0;
  hull_tri_[i1] = 1;
  hull_tri_[i2] = 2;
  hull_hash_[hash_key(p_[i0])] = i0;
  hull_hash_[hash_key(p_[i1])] = i1;
  hull_hash_[hash_key(p_[i2])] = i2;
  add_triangle(i0, i1, i2, -1, -1, -1);

  Vec2 prev = Vec2::Zero();
  constexpr double kDuplicateEps = 1e-12;
  for (std::size_t k = 0; k < ids.size(); ++k) {
    const std::int32_t i = ids[k];
    const Vec2& x = p_[i];
    if (k > 0 && std::abs(x.x() - prev.x()) <= kDuplicateEps && std::abs(x.y() - prev.y()) <= kDuplicateEps) continue;
    prev = x;
    if (i == i0 || i == i1 || i == i2) continue;

    std::int32_t start = 0;
    const std::size_t key = hash_key(x);
    for (std::size_t j = 0; j < hash_size_; ++j) {
      start = hull_hash_[(key + j) % hash_size_];
      if (start != -1 && start != hull_next_[start]) break;
    }
    start = hull_prev_[start];

    // First hull edge e -> next(e) that x sees from outside (x strictly right of it).
    std::int32_t e = start;
    while (true) {
      const std::int32_t q = hull_next_[e];
      if (orient(p_[e], p_[q], x) < 0.0) break;
      e = q;
      if (e == start) {
        e = -1;
        break;
      }
    }
    if (e == -1) continue;  // inside the hull: near-duplicate

    std::int32_t t = add_triangle(e, i, hull_next_[e], -1, -1, hull_tri_[e]);
    hull_tri_[i] = legalize(t + 2);
    hull_tri_[e] = t;

    std::int32_t nx = hull_next_[e];
    while (true) {
      const std::int32_t q = hull_next_[nx];
      if (!(orient(p_[nx], p_[q], x) < 0.0)) break;
      t = add_triangle(nx, i, q, hull_tri_[i], -1, hull_tri_[nx]);
      hull_tri_[i] = legalize(t + 2);
      hull_next_[nx] = nx;  // removed from hull
      nx = q;
    }

    if (e == start) {
      while (true) {
        const std::int32_t q = hull_prev_[e];
        if (!(orient(p_[q], p_[e], x) < 0.0)) break;
        t = add_triangle(q, i, e, -1, hull_tri_[e], hull_tri_[q]);
        legalize(t + 2);
        hull_tri_[q] = t;
        hull_next_[e] = e;
        e = q;
      }
    }

    hull_start_ = hull_prev_[i] = e;
    hull_next_[e] = hull_prev_[nx] = i;
    hull_next_[i] = nx;
    hull_hash_[hash_key(x)] = i;
    hull_hash_[hash_key(p_[e])] = e;
  }

  Triangulation out;
  out.triangles = std::move(triangles_);
  out.halfedges = std::move(halfedges_);
  return out;
}

}  // namespace

Triangulation delaunay_triangulate(std::span<const Vec2> points) { return Builder(points).run(); }

double circumradius(const Vec2& a, const Vec2& b, const Vec2& c) { return std::sqrt(circumradius_sq(a, b, c)); }

}  // namespace sherdreg
