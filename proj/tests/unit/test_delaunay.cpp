#include "oracles.hpp"
#include "sherdreg/delaunay.hpp"

#include <doctest.h>

using namespace sherdreg;

namespace {

void check_delaunay(const std::vector<Vec2>& pts) {
  const Triangulation t = delaunay_triangulate(pts);
  REQUIRE(t.triangle_count() > 0);
  double area = 0.0;
  for (std::size_t k = 0; k < t.triangle_count(); ++k) {
    const Vec2& a = pts[static_cast<std::size_t>(t.triangles[3 * k])];
    const Vec2& b = pts[static_cast<std::size_t>(t.triangles[3 * k + 1])];
    const Vec2& c = pts[static_cast<std::size_t>(t.triangles[3 * k + 2])];
    const double twice = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();
    CHECK(twice > 0.0);  // counter-clockwise
    area += 0.5 * twice;
    // empty circumcircle, with a relative tolerance for cocircular points
    const double d = 2.0 * twice;
    const double a2 = a.squaredNorm(), b2 = b.squaredNorm(), c2 = c.squaredNorm();
    const Vec2 centre((a2 * (b.y() - c.y()) + b2 * (c.y() - a.y()) + c2 * (a.y() - b.y())) / d,
                      (a2 * (c.x() - b.x()) + b2 * (a.x() - c.x()) + c2 * (b.x() - a.x())) / d);
    const double r = (a - centre).norm();
    for (const auto& p : pts) CHECK((p - centre).norm() >= r * (1.0 - 1e-9));
  }
  for (std::size_t e = 0; e < t.halfedges.size(); ++e) {
    const auto o = t.halfedges[e];
    if (o >= 0) CHECK(t.halfedges[static_cast<std::size_t>(o)] == static_cast<std::int32_t>(e));
  }
  CHECK(area == doctest::Approx(std::abs(oracle::shoelace(oracle::convex_hull(pts)))).epsilon(1e-9));
}

}  // namespace

TEST_CASE("random point sets satisfy the empty-circle property") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-50.0, 50.0);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<Vec2> pts(50 + static_cast<std::size_t>(trial) * 40);
    for (auto& p : pts) p = Vec2(u(rng), u(rng));
    check_delaunay(pts);
  }
}

TEST_CASE("grid with many cocircular quadruples") {
  std::vector<Vec2> pts;
  for (int i = 0; i < 15; ++i)
    for (int j = 0; j < 12; ++j) pts.emplace_back(i * 0.5, j * 0.5);
  check_delaunay(pts);
}

TEST_CASE("degenerate input") {
  CHECK(delaunay_triangulate(std::vector<Vec2>{{0, 0}, {1, 1}, {2, 2}, {3, 3}}).triangle_count() == 0);
  CHECK(delaunay_triangulate(std::vector<Vec2>{{0, 0}, {1, 0}}).triangle_count() == 0);
  CHECK(circumradius(Vec2(0, 0), Vec2(2, 0), Vec2(0, 2)) == doctest::Approx(std::sqrt(2.0)));
  CHECK(std::isinf(circumradius(Vec2(0, 0), Vec2(1, 1), Vec2(2, 2))));
}
