#include "sherdreg/contour.hpp"

#include "sherdreg/delaunay.hpp"
#include "sherdreg/errors.hpp"
#include "sherdreg/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <unordered_map>

namespace sherdreg {
namespace {

double cross(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double orient(const Vec2& a, const Vec2& b, const Vec2& c) { return cross(b - a, c - a); }

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& p) {
  return std::min(a.x(), b.x()) <= p.x() && p.x() <= std::max(a.x(), b.x()) && std::min(a.y(), b.y()) <= p.y() &&
         p.y() <= std::max(a.y(), b.y());
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  const double d1 = orient(q1, q2, p1);
  const double d2 = orient(q1, q2, p2);
  const double d3 = orient(p1, p2, q1);
  const double d4 = orient(p1, p2, q2);
  if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) return true;
  if (d1 == 0 && on_segment(q1, q2, p1)) return true;
  if (d2 == 0 && on_segment(q1, q2, p2)) return true;
  if (d3 == 0 && on_segment(p1, p2, q1)) return true;
  if (d4 == 0 && on_segment(p1, p2, q2)) return true;
  return false;
}

}  // namespace

double signed_area(std::span<const Vec2> ring) {
  double a = 0.0;
  for (std::size_t i = 0, n = ring.size(); i < n; ++i) a += cross(ring[i], ring[(i + 1) % n]);
  return 0.5 * a;
}

bool is_simple(std::span<const Vec2> ring) {
  const std::size_t n = ring.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[(i + 1) % n];
    // Adjacent edge folding back onto this one.
    const Vec2& c = ring[(i + 2) % n];
    if (orient(a, b, c) == 0.0 && (b - a).dot(c - b) < 0.0) return false;
    // Edges i and j share no vertex when 2 <= j - i <= n - 2.
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      if (segments_intersect(a, b, ring[j], ring[(j + 1) % n])) return false;
    }
  }
  return true;
}

bool contains(std::span<const Vec2> ring, const Vec2& q) {
  bool inside = false;
  for (std::size_t i = 0, n = ring.size(), j = n - 1; i < n; j = i++) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[j];
    if ((a.y() > q.y()) != (b.y() > q.y()) && q.x() < (b.x() - a.x()) * (q.y() - a.y()) / (b.y() - a.y()) + a.x()) {
      inside = !inside;
    }
  }
  return inside;
}

Polygon2::Polygon2(std::vector<Vec2> vertices) : vertices_(std::move(vertices)) {
  if (vertices_.size() < 3) throw Error(ErrorCode::InvalidPolygon, "polygon needs at least 3 vertices");
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (!vertices_[i].allFinite()) throw Error(ErrorCode::InvalidPolygon, "non-finite polygon vertex");
    if ((vertices_[(i + 1) % vertices_.size()] - vertices_[i]).norm() <= 1e-9) {
      throw Error(ErrorCode::InvalidPolygon, "consecutive polygon vertices coincide");
    }
  }
  if (!is_simple(vertices_)) throw Error(ErrorCode::InvalidPolygon, "polygon is self-intersecting");
}

double Polygon2::signed_area() const { return sherdreg::signed_area(vertices_); }

double Polygon2::perimeter() const {
  double p = 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) p += (vertices_[(i + 1) % vertices_.size()] - vertices_[i]).norm();
  return p;
}

AlphaShape alpha_shape(std::span<const Vec2> points, double alpha) {
  require(points.size() >= 10, "alpha shape needs at least 10 points");
  require(alpha > 0.0, "alpha must be positive");

  const Triangulation tri = delaunay_triangulate(points);
  const std::size_t nt = tri.triangle_count();
  if (nt == 0) throw Error(ErrorCode::AlphaDegenerate, "point set has no 2D extent");

  std::vector<char> kept(nt, 0);
  for (std::size_t t = 0; t < nt; ++t) {
    const auto& v = tri.triangles;
    kept[t] = circumradius(points[v[3 * t]], points[v[3 * t + 1]], points[v[3 * t + 2]]) < alpha;
  }

  // Connected components over shared edges.
  std::vector<std::int32_t> component(nt, -1);
  std::vector<double> component_area;
  std::vector<std::int32_t> stack;
  for (std::size_t seed = 0; seed < nt; ++seed) {
    if (!kept[seed] || component[seed] >= 0) continue;
    const auto id = static_cast<std::int32_t>(component_area.size());
    component_area.push_back(0.0);
    stack.assign(1, static_cast<std::int32_t>(seed));
    component[seed] = id;
    while (!stack.empty()) {
      const std::int32_t t = stack.back();
      stack.pop_back();
      const auto& v = tri.triangles;
      component_area[id] += std::abs(orient(points[v[3 * t]], points[v[3 * t + 1]], points[v[3 * t + 2]])) * 0.5;
      for (int k = 0; k < 3; ++k) {
        const std::int32_t opp = tri.halfedges[3 * t + k];
        if (opp < 0) continue;
        const std::int32_t u = opp / 3;
        if (kept[u] && component[u] < 0) {
          component[u] = id;
          stack.push_back(u);
        }
      }
    }
  }
  if (component_area.empty()) throw Error(ErrorCode::AlphaDegenerate, "no Delaunay triangle passes the alpha test");

  const auto best = static_cast<std::int32_t>(
      std::max_element(component_area.begin(), component_area.end()) - component_area.begin());

  std::vector<char> used_vertex(points.size(), 0);
  std::size_t covered = 0;
  // Boundary half-edges of the chosen component, keyed by start vertex.
  std::unordered_multimap<std::int32_t, std::int32_t> outgoing;
  for (std::size_t t = 0; t < nt; ++t) {
    if (component[t] != best) continue;
    for (int k = 0; k < 3; ++k) {
      const auto e = static_cast<std::int32_t>(3 * t + k);
      const std::int32_t vtx = tri.triangles[e];
      if (!used_vertex[vtx]) {
        used_vertex[vtx] = 1;
        ++covered;
      }
      const std::int32_t opp = tri.halfedges[e];
      if (opp < 0 || component[opp / 3] != best) outgoing.emplace(vtx, tri.triangles[Triangulation::next_halfedge(e)]);
    }
  }
  const double fraction = static_cast<double>(covered) / static_cast<double>(points.size());
  if (fraction < 0.5) {
    throw Error(ErrorCode::AlphaTooSmall, "largest alpha component holds only " +
                                              std::to_string(static_cast<int>(100 * fraction)) + "% of the points");
  }

  // Walk boundary loops, splitting wherever a loop touches itself at a vertex.
  std::vector<std::vector<std::int32_t>> loops;
  while (!outgoing.empty()) {
    std::vector<std::int32_t> path;
    std::unordered_map<std::int32_t, std::size_t> position;
    auto it = outgoing.begin();
    std::int32_t at = it->first;
    path.push_back(at);
    position[at] = 0;
    while (true) {
      auto edge = outgoing.find(at);
      if (edge == outgoing.end()) break;  // open chain; cannot occur for a manifold boundary
      const std::int32_t to = edge->second;
      outgoing.erase(edge);
      auto seen = position.find(to);
      if (seen != position.end()) {
        const std::size_t j = seen->second;
        loops.emplace_back(path.begin() + static_cast<std::ptrdiff_t>(j), path.end());
        for (std::size_t q = j + 1; q < path.size(); ++q) position.erase(path[q]);
        path.resize(j + 1);
        if (j == 0 && outgoing.find(path[0]) == outgoing.end()) break;
        at = to;
        continue;
      }
      position[to] = path.size();
      path.push_back(to);
      at = to;
    }
  }

  const std::vector<std::int32_t>* outer = nullptr;
  double outer_area = 0.0;
  for (const auto& loop : loops) {
    if (loop.size() < 3) continue;
    std::vector<Vec2> ring;
    ring.reserve(loop.size());
    for (auto v : loop) ring.push_back(points[v]);
    const double a = signed_area(ring);
    if (a > outer_area) {
      outer_area = a;
      outer = &loop;
    }
  }
  if (outer == nullptr) throw Error(ErrorCode::AlphaDegenerate, "alpha complex has no closed outer boundary");

  const auto first = std::min_element(outer->begin(), outer->end());
  std::vector<std::int32_t> ordered(first, outer->end());
  ordered.insert(ordered.end(), outer->begin(), first);

  std::vector<Vec2> ring;
  std::vector<std::size_t> indices;
  ring.reserve(ordered.size());
  for (auto v : ordered) {
    ring.push_back(points[v]);
    indices.push_back(static_cast<std::size_t>(v));
  }
  return AlphaShape{Polygon2(std::move(ring)), std::move(indices), fraction};
}

Polygon2 alpha_shape_contour(std::span<const Vec2> points, double alpha) { return alpha_shape(points, alpha).polygon; }

double default_alpha(std::span<const Vec2> points) {
  require(points.size() >= 2, "alpha estimate needs at least 2 points");
  std::vector<Vec3> lifted;
  lifted.reserve(points.size());
  for (const auto& p : points) lifted.emplace_back(p.x(), p.y(), 0.0);
  const NeighborIndex index(std::move(lifted));
  std::vector<double> spacing;
  spacing.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto nn = index.k_nearest(index.point(i), 2);
    spacing.push_back(nn.back().distance);
  }
  const auto mid = spacing.begin() + static_cast<std::ptrdiff_t>(spacing.size() / 2);
  std::nth_element(spacing.begin(), mid, spacing.end());
  return std::clamp(4.0 * *mid, 0.5, 10.0);
}

Contour resample_uniform(const Polygon2& polygon, std::size_t n_c) {
  require(n_c >= 8, "contour needs at least 8 samples");
  std::vector<Vec2> ring = polygon.vertices();
  if (polygon.signed_area() > 0.0) std::reverse(ring.begin() + 1, ring.end());

  const std::size_t m = ring.size();
  std::vector<double> cumulative(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) cumulative[i + 1] = cumulative[i] + (ring[(i + 1) % m] - ring[i]).norm();
  const double perimeter = cumulative[m];

  Contour c;
  c.perimeter = perimeter;
  c.vertices.reserve(n_c);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < n_c; ++k) {
    const double s = perimeter * static_cast<double>(k) / static_cast<double>(n_c);
    while (seg + 1 < m && cumulative[seg + 1] <= s) ++seg;
    const double len = cumulative[seg + 1] - cumulative[seg];
    const double t = len > 0.0 ? (s - cumulative[seg]) / len : 0.0;
    const Vec2& a = ring[seg];
    const Vec2& b = ring[(seg + 1) % m];
    c.vertices.push_back(t == 0.0 ? a : Vec2(a + t * (b - a)));
  }
  return c;
}

ShapeDescriptor descriptor(const Contour& contour) {
  const std::size_t n = contour.size();
  require(n >= 3, "descriptor needs at least 3 contour vertices");
  ShapeDescriptor d;
  d.edge_length = contour.edge_length();
  d.turning.resize(n);
  d.theta_bar.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& prev = contour.vertices[(i + n - 1) % n];
    const Vec2& cur = contour.vertices[i];
    const Vec2& next = contour.vertices[(i + 1) % n];
    const Vec2 in = cur - prev;
    const Vec2 out = next - cur;
    // Clockwise turns are positive.
    d.turning[i] = std::atan2(-cross(in, out), in.dot(out));
    sum += d.turning[i];
    d.theta_bar[i] = sum;
  }
  return d;
}

ShapeDescriptor rotate_start(const ShapeDescriptor& d, std::size_t start) {
  const std::size_t n = d.size();
  require(start < n, "start vertex out of range");
  ShapeDescriptor r;
  r.edge_length = d.edge_length;
  r.turning.resize(n);
  r.theta_bar.resize(n);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    r.turning[i] = d.turning[(start + i) % n];
    sum += r.turning[i];
    r.theta_bar[i] = sum;
  }
  return r;
}

ShapeDescriptor descriptor_with_start(const Contour& contour, std::size_t start) {
  require(start < contour.size(), "start vertex out of range");
  return rotate_start(descriptor(contour), start);
}

ShapeDescriptor mirrored(const ShapeDescriptor& d) {
  const std::size_t n = d.size();
  ShapeDescriptor r;
  r.edge_length = d.edge_length;
  r.turning.resize(n);
  r.theta_bar.resize(n);
  double sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    r.turning[j] = d.turning[(n - j) % n];
    sum += r.turning[j];
    r.theta_bar[j] = sum;
  }
  return r;
}

}  // namespace sherdreg
