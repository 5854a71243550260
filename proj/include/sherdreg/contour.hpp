#pragma once

#include "sherdreg/geometry.hpp"

#include <cstddef>
#include <span>
#include <vector>

namespace sherdreg {

inline constexpr std::size_t kDefaultContourSamples = 200;

/// Simple closed polygon; the edge from the last vertex back to the first is
/// implicit. Construction rejects fewer than three vertices, edges shorter
/// than 1e-9 mm and any self-intersection.
class Polygon2 {
 public:
  explicit Polygon2(std::vector<Vec2> vertices);

  const std::vector<Vec2>& vertices() const noexcept { return vertices_; }
  std::size_t size() const noexcept { return vertices_.size(); }

  /// Shoelace area; negative for clockwise vertex order.
  double signed_area() const;
  double perimeter() const;

 private:
  std::vector<Vec2> vertices_;
};

double signed_area(std::span<const Vec2> ring);
bool is_simple(std::span<const Vec2> ring);
bool contains(std::span<const Vec2> ring, const Vec2& q);

struct AlphaShape {
  Polygon2 polygon;
  std::vector<std::size_t> point_indices;  // source index of each polygon vertex
  double covered_fraction = 0.0;           // share of input points in the kept component
};

/// Outer boundary of the largest connected component of the alpha complex,
/// where a Delaunay triangle is kept when its circumradius is below `alpha`.
/// The loop starts at the vertex with the lowest input index, so the result
/// does not depend on where the point set sits in the plane.
AlphaShape alpha_shape(std::span<const Vec2> points, double alpha);
Polygon2 alpha_shape_contour(std::span<const Vec2> points, double alpha);

/// 4 x median nearest-neighbour spacing, clamped to [0.5, 10] mm.
double default_alpha(std::span<const Vec2> points);

/// n_c points spaced uniformly by arc length, clockwise.
struct Contour {
  std::vector<Vec2> vertices;
  double perimeter = 0.0;  // of the polygon the samples were taken from

  std::size_t size() const noexcept { return vertices.size(); }
  double edge_length() const { return perimeter / static_cast<double>(vertices.size()); }
};

/// Samples at arc length k * perimeter / n_c from vertex 0, after flipping a
/// counter-clockwise polygon to clockwise (vertex 0 stays first).
Contour resample_uniform(const Polygon2& polygon, std::size_t n_c);

/// Turning-function descriptor. `turning[i]` is the signed exterior angle at
/// vertex i, positive for clockwise turns; `theta_bar` holds the running sums,
/// so its last entry is 2*pi for a simple clockwise contour.
struct ShapeDescriptor {
  std::vector<double> turning;
  std::vector<double> theta_bar;
  double edge_length = 0.0;

  std::size_t size() const noexcept { return theta_bar.size(); }
};

ShapeDescriptor descriptor(const Contour& contour);
ShapeDescriptor descriptor_with_start(const Contour& contour, std::size_t start);

/// Same descriptor re-based at vertex `start`.
ShapeDescriptor rotate_start(const ShapeDescriptor& d, std::size_t start);

/// Descriptor of the reflected contour traversed clockwise again: the vertex
/// order reverses, so turning'[j] = turning[(n - j) mod n].
ShapeDescriptor mirrored(const ShapeDescriptor& d);

}  // namespace sherdreg
