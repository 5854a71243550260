#pragma once

#include "sherdreg/geometry.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sherdreg {

/// Half-edge Delaunay triangulation of a planar point set (sweep-hull
/// construction with Lawson flips).
///
/// Triangle t occupies triangles[3t .. 3t+2]; halfedges[e] is the opposite
/// half-edge of e, or -1 on the convex hull. Triangles are counter-clockwise.
/// Exact duplicates (and points within 1e-12 of a previously inserted one in
/// sweep order) are left out of the triangulation.
struct Triangulation {
  std::vector<std::int32_t> triangles;
  std::vector<std::int32_t> halfedges;

  std::size_t triangle_count() const { return triangles.size() / 3; }
  static std::int32_t next_halfedge(std::int32_t e) { return e % 3 == 2 ? e - 2 : e + 1; }
  static std::int32_t prev_halfedge(std::int32_t e) { return e % 3 == 0 ? e + 2 : e - 1; }
};

/// Returns an empty triangulation when every point is collinear or fewer
/// than three distinct points exist.
Triangulation delaunay_triangulate(std::span<const Vec2> points);

double circumradius(const Vec2& a, const Vec2& b, const Vec2& c);

}  // namespace sherdreg
