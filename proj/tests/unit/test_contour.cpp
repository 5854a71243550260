#include "oracles.hpp"
#include "sherdreg/contour.hpp"
#include "sherdreg/errors.hpp"
#include "sherdreg/synth.hpp"

#include <doctest.h>

#include <numbers>

using namespace sherdreg;
using std::numbers::pi;

namespace {

std::vector<Vec2> square_ccw(double side) { return {{0, 0}, {side, 0}, {side, side}, {0, side}}; }

std::vector<Vec2> grid_square(double spacing) {
  std::vector<Vec2> pts;
  const int n = static_cast<int>(std::round(1.0 / spacing));
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) pts.emplace_back(i * spacing, j * spacing);
  return pts;
}

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("no error thrown");
  return ErrorCode::PreconditionViolation;
}

}  // namespace

TEST_CASE("polygon validation") {
  CHECK(code_of([] { Polygon2({{0, 0}, {1, 0}}); }) == ErrorCode::InvalidPolygon);
  CHECK(code_of([] { Polygon2({{0, 0}, {1, 1}, {1, 0}, {0, 1}}); }) == ErrorCode::InvalidPolygon);  // bow tie
  CHECK(code_of([] { Polygon2({{0, 0}, {0, 0}, {1, 0}, {0, 1}}); }) == ErrorCode::InvalidPolygon);
  const Polygon2 sq(square_ccw(2));
  CHECK(sq.signed_area() == doctest::Approx(4.0));
  CHECK(sq.perimeter() == doctest::Approx(8.0));
}

TEST_CASE("alpha shape of a dense square") {
  const auto pts = grid_square(0.02);
  const Polygon2 poly = alpha_shape_contour(pts, 0.1);
  CHECK(std::abs(oracle::shoelace(poly.vertices())) == doctest::Approx(1.0).epsilon(0.02));
  CHECK(code_of([] { alpha_shape_contour(std::vector<Vec2>{{0, 0}, {1, 0}, {0, 1}, {1, 1}, {2, 2}}, 1.0); }) ==
        ErrorCode::PreconditionViolation);
}

TEST_CASE("alpha larger than the annulus gives the convex hull") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> ang(0.0, 2 * pi), rad(0.6, 1.0);
  std::vector<Vec2> pts;
  for (int i = 0; i < 400; ++i) {
    const double a = ang(rng), r = rad(rng);
    pts.emplace_back(r * std::cos(a), r * std::sin(a));
  }
  const Polygon2 poly = alpha_shape_contour(pts, 1e6);
  const auto hull = oracle::convex_hull(pts);
  CHECK(std::abs(poly.signed_area()) == doctest::Approx(std::abs(oracle::shoelace(hull))).epsilon(1e-12));
  CHECK(poly.size() == hull.size());
}

TEST_CASE("fragmented point sets are rejected") {
  std::vector<Vec2> pts;
  for (int i = 0; i < 6; ++i) pts.emplace_back(i * 0.1, 0.0 + (i % 2) * 0.1);
  for (int i = 0; i < 6; ++i) pts.emplace_back(50.0 + i * 0.1, (i % 2) * 0.1);
  for (int i = 0; i < 6; ++i) pts.emplace_back(100.0 + i * 0.1, (i % 2) * 0.1);
  CHECK(code_of([&] { alpha_shape_contour(pts, 0.3); }) == ErrorCode::AlphaTooSmall);
  std::vector<Vec2> sparse;
  for (int i = 0; i < 12; ++i) sparse.emplace_back(i * 10.0, (i % 3) * 7.0);
  CHECK(code_of([&] { alpha_shape_contour(sparse, 0.01); }) == ErrorCode::AlphaDegenerate);
}

TEST_CASE("uniform resampling") {
  const Contour c = resample_uniform(Polygon2(square_ccw(2)), 8);
  REQUIRE(c.size() == 8);
  CHECK(c.perimeter == doctest::Approx(8.0));
  CHECK(c.edge_length() == doctest::Approx(1.0));
  CHECK(signed_area(c.vertices) < 0.0);
  CHECK(c.vertices[0].isApprox(Vec2(0, 0)));
  // clockwise from (0,0): up the left side first
  const std::vector<Vec2> expect = {{0, 0}, {0, 1}, {0, 2}, {1, 2}, {2, 2}, {2, 1}, {2, 0}, {1, 0}};
  for (std::size_t i = 0; i < 8; ++i) CHECK((c.vertices[i] - expect[i]).norm() < 1e-12);
  for (std::size_t i = 0; i < 8; ++i) CHECK((c.vertices[(i + 1) % 8] - c.vertices[i]).norm() == doctest::Approx(1.0));

  const Contour tri = resample_uniform(Polygon2({{0, 0}, {3, 0}, {0, 4}}), 12);
  CHECK(signed_area(tri.vertices) < 0.0);
}

TEST_CASE("resampled vertices lie on the source polygon") {
  std::mt19937_64 rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const auto outline = random_star_outline(rng, 30.0, 10.0, 75.0, 9, 300);
    const Contour c = resample_uniform(Polygon2(outline), 200);
    REQUIRE(c.size() == 200);
    CHECK(c.edge_length() * 200 == doctest::Approx(Polygon2(outline).perimeter()).epsilon(1e-9));
    for (const auto& v : c.vertices) CHECK(oracle::distance_to_ring(v, outline) < 1e-9);
  }
}

TEST_CASE("square descriptor") {
  const ShapeDescriptor d = descriptor(resample_uniform(Polygon2(square_ccw(2)), 8));
  const std::vector<double> expect = {pi / 2, pi / 2, pi, pi, 3 * pi / 2, 3 * pi / 2, 2 * pi, 2 * pi};
  for (std::size_t i = 0; i < 8; ++i) CHECK(d.theta_bar[i] == doctest::Approx(expect[i]).epsilon(1e-12));
  CHECK(d.edge_length == doctest::Approx(1.0));

  const ShapeDescriptor s1 = descriptor_with_start(resample_uniform(Polygon2(square_ccw(2)), 8), 1);
  const std::vector<double> raw = {0, pi / 2, 0, pi / 2, 0, pi / 2, 0, pi / 2};
  double sum = 0.0;
  for (std::size_t i = 0; i < 8; ++i) {
    CHECK(s1.turning[i] == doctest::Approx(raw[i]).epsilon(1e-12));
    sum += raw[i];
    CHECK(s1.theta_bar[i] == doctest::Approx(sum).epsilon(1e-12));
  }
}

TEST_CASE("regular polygon descriptor and start invariance") {
  const std::size_t n = 24;
  std::vector<Vec2> ring;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = -2 * pi * static_cast<double>(i) / n;
    ring.emplace_back(std::cos(a), std::sin(a));
  }
  const Contour c = resample_uniform(Polygon2(ring), n);
  const ShapeDescriptor d = descriptor(c);
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(d.turning[i] == doctest::Approx(2 * pi / n).epsilon(1e-9));
    CHECK(d.theta_bar[i] == doctest::Approx((i + 1) * 2 * pi / n).epsilon(1e-9));
  }
  const ShapeDescriptor d5 = descriptor_with_start(c, 5);
  for (std::size_t i = 0; i < n; ++i) CHECK(d5.theta_bar[i] == doctest::Approx(d.theta_bar[i]).epsilon(1e-9));
  CHECK(descriptor_with_start(c, 0).theta_bar == d.theta_bar);
}

TEST_CASE("descriptor properties on random contours") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const auto outline = random_star_outline(rng, 40.0, 10.0, 75.0, 7 + trial % 5);
    const Contour c = resample_uniform(Polygon2(outline), 200);
    const ShapeDescriptor d = descriptor(c);
    CHECK(d.theta_bar.back() == doctest::Approx(2 * pi).epsilon(1e-9));
    for (double t : d.turning) CHECK(std::abs(t) < pi);
    for (std::size_t k : {1ul, 17ul, 199ul}) {
      Contour rot = c;
      std::rotate(rot.vertices.begin(), rot.vertices.begin() + static_cast<std::ptrdiff_t>(k), rot.vertices.end());
      const ShapeDescriptor a = descriptor_with_start(c, k), b = descriptor(rot);
      CHECK(a.theta_bar == b.theta_bar);
      CHECK(a.turning == b.turning);
      CHECK(rotate_start(d, k).turning == a.turning);
    }
  }
}

TEST_CASE("convex contours have non-decreasing theta_bar") {
  std::vector<Vec2> ellipse;
  for (int i = 0; i < 90; ++i) {
    const double a = 2 * pi * i / 90.0;
    ellipse.emplace_back(3 * std::cos(a), std::sin(a));
  }
  const ShapeDescriptor d = descriptor(resample_uniform(Polygon2(ellipse), 64));
  for (std::size_t i = 1; i < d.size(); ++i) CHECK(d.theta_bar[i] >= d.theta_bar[i - 1]);
}

TEST_CASE("contour descriptor is invariant to rigid motion of the points") {
  std::mt19937_64 rng(77);
  const auto outline = random_star_outline(rng, 25.0, 10.0, 75.0, 9);
  std::uniform_real_distribution<double> u(-30.0, 30.0);
  std::vector<Vec2> pts;
  const Polygon2 poly(outline);
  while (pts.size() < 4000) {
    const Vec2 q(u(rng), u(rng));
    if (contains(outline, q)) pts.push_back(q);
  }
  const double alpha = default_alpha(pts);
  const ShapeDescriptor a = descriptor(resample_uniform(alpha_shape_contour(pts, alpha), 200));
  const double ang = 1.234;
  const Eigen::Rotation2Dd r(ang);
  std::vector<Vec2> moved;
  for (const auto& p : pts) moved.push_back(r * p + Vec2(123.0, -45.0));
  const ShapeDescriptor b = descriptor(resample_uniform(alpha_shape_contour(moved, alpha), 200));
  double best = 1e9;
  for (std::size_t s = 0; s < 200; ++s) {
    const ShapeDescriptor bs = rotate_start(b, s);
    double worst = 0.0;
    for (std::size_t i = 0; i < 200; ++i) worst = std::max(worst, std::abs(a.theta_bar[i] - bs.theta_bar[i]));
    best = std::min(best, worst);
  }
  CHECK(best < 1e-4);
}

TEST_CASE("default alpha clamps") {
  std::vector<Vec2> dense, sparse;
  for (int i = 0; i < 20; ++i)
    for (int j = 0; j < 20; ++j) {
      dense.emplace_back(i * 0.01, j * 0.01);
      sparse.emplace_back(i * 5.0, j * 5.0);
    }
  CHECK(default_alpha(dense) == 0.5);
  CHECK(default_alpha(sparse) == 10.0);
}
