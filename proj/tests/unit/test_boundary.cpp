#include "oracles.hpp"
#include "sherdreg/boundary.hpp"
#include "sherdreg/errors.hpp"
#include "sherdreg/neighbor_index.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

using namespace sherdreg;

namespace {

constexpr double kR = 30.0;
constexpr std::size_t kHemiPoints = 10000;

PointCloud grid(int n, std::vector<std::vector<int>> vis = {}) {
  std::vector<Vec3> pts;
  for (int y = 0; y < n; ++y) {
    for (int x = 0; x < n; ++x) pts.emplace_back(x, y, 0.0);
  }
  return PointCloud(std::move(pts), std::move(vis));
}

// Area-uniform Fibonacci lattice on the upper hemisphere; the rim is z = 0.
std::vector<Vec3> hemisphere() {
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<Vec3> pts;
  for (std::size_t i = 0; i < kHemiPoints; ++i) {
    const double z = kR * (static_cast<double>(i) + 0.5) / kHemiPoints;
    const double r = std::sqrt(kR * kR - z * z);
    const double a = golden * static_cast<double>(i);
    pts.emplace_back(r * std::cos(a), r * std::sin(a), z);
  }
  return pts;
}

double spacing() { return std::sqrt(2.0 * std::numbers::pi * kR * kR / kHemiPoints); }

struct Quality {
  double precision, recall;
};

// Precision: share of extracted points within two spacings of the rim.
// Recall: share of rim positions (one per spacing along the equator) with an
// extracted point within two spacings.
Quality rim_quality(const std::vector<Vec3>& pts, const BoundarySet& b) {
  const double tol = 2.0 * spacing();
  std::size_t good = 0;
  std::vector<Vec3> found;
  for (auto i : b.indices) {
    const Vec3& p = pts[i];
    const double rim_dist = std::hypot(std::hypot(p.x(), p.y()) - kR, p.z());
    if (rim_dist <= tol) ++good;
    found.push_back(p);
  }
  const auto samples = static_cast<std::size_t>(2.0 * std::numbers::pi * kR / spacing());
  std::size_t covered = 0;
  for (std::size_t k = 0; k < samples; ++k) {
    const double a = 2.0 * std::numbers::pi * static_cast<double>(k) / samples;
    const Vec3 q(kR * std::cos(a), kR * std::sin(a), 0.0);
    if (!found.empty() && oracle::brute_nearest(found, q).distance <= tol) ++covered;
  }
  return {found.empty() ? 0.0 : static_cast<double>(good) / found.size(), static_cast<double>(covered) / samples};
}

}  // namespace

TEST_CASE("grid interior and edge points") {
  const PointCloud g = grid(21);
  NeighborIndex index(g);
  auto gap_at = [&](int x, int y) {
    const std::size_t i = static_cast<std::size_t>(y * 21 + x);
    std::vector<std::size_t> nb;
    for (const auto& n : index.k_nearest(g[i], 9)) {
      if (n.index != i) nb.push_back(n.index);
    }
    return largest_angular_gap(g, i, nb);
  };
  // The 8-neighbourhood of an interior node is the full ring of axis and diagonal nodes.
  CHECK(gap_at(10, 10) == doctest::Approx(std::numbers::pi / 4).epsilon(1e-9));
  CHECK(gap_at(10, 10) < 2.0 * std::numbers::pi / 3.0);
  CHECK(gap_at(0, 10) == doctest::Approx(std::numbers::pi).epsilon(1e-9));
  CHECK(gap_at(0, 0) > std::numbers::pi);

  std::vector<std::size_t> all(g.size());
  for (std::size_t i = 0; i < all.size(); ++i) all[i] = i;
  const BoundarySet b = extract_boundary(g, all, 8, 2.0 * std::numbers::pi / 3.0);
  CHECK(b.size() == 80);  // the perimeter of a 21 x 21 grid
  for (auto i : b.indices) {
    const int x = static_cast<int>(i % 21), y = static_cast<int>(i / 21);
    CHECK((x == 0 || y == 0 || x == 20 || y == 20));
  }
}

TEST_CASE("hemisphere rim precision and recall") {
  const auto pts = hemisphere();
  const PointCloud cloud(pts);
  const BoundarySet b = extract_boundary(cloud);
  REQUIRE_FALSE(b.empty());
  const Quality q = rim_quality(pts, b);
  CHECK(q.precision > 0.9);
  CHECK(q.recall > 0.9);
  CHECK(std::is_sorted(b.indices.begin(), b.indices.end()));
}

TEST_CASE("boundary set is invariant under rigid motion") {
  const auto pts = hemisphere();
  const BoundarySet ref = extract_boundary(PointCloud(pts));
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 3; ++trial) {
    const RigidTransform t = oracle::random_transform(rng);
    std::vector<Vec3> moved;
    for (const auto& p : pts) moved.push_back(t(p));
    CHECK(extract_boundary(PointCloud(moved)).indices == ref.indices);
  }
}

TEST_CASE("raising the gap threshold never adds points") {
  const PointCloud cloud(hemisphere());
  BoundarySet prev;
  bool first = true;
  for (double g : {1.2, 1.6, 2.0, 2.4, 2.8, 3.2}) {
    BoundaryConfig c;
    c.gap_threshold = g;
    const BoundarySet b = extract_boundary(cloud, c);
    if (!first) CHECK(std::includes(prev.indices.begin(), prev.indices.end(), b.indices.begin(), b.indices.end()));
    prev = b;
    first = false;
  }
}

TEST_CASE("extract_boundary preconditions") {
  const PointCloud tiny(std::vector<Vec3>{{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {1, 1, 0}});
  const std::vector<std::size_t> c{0};
  try {
    extract_boundary(tiny, c, 4, 2.0);
    FAIL("expected TooFewNeighbors");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::TooFewNeighbors);
  }
  CHECK_THROWS_AS(extract_boundary(tiny, {}, 4, 2.0), Error);
  CHECK_THROWS_AS(extract_boundary(tiny, c, 3, 2.0), Error);
}

namespace {

constexpr int kImage = 400;
constexpr double kFocal = 1000.0;
constexpr double kHeight = 200.0;

// Camera above the hemisphere looking straight down; the mask is the disk
// onto which the rim projects.
CameraView down_camera() {
  Mat3 k;
  k << kFocal, 0, kImage / 2.0, 0, kFocal, kImage / 2.0, 0, 0, 1;
  RigidTransform pose;
  pose.rotation = Vec3(1.0, -1.0, -1.0).asDiagonal();
  pose.translation = Vec3(0.0, 0.0, kHeight);
  Mask m{kImage, kImage, std::vector<std::uint8_t>(kImage * kImage, 0)};
  const double rho = kFocal * kR / kHeight;
  for (int y = 0; y < kImage; ++y) {
    for (int x = 0; x < kImage; ++x) {
      if (std::hypot(x - kImage / 2.0, y - kImage / 2.0) <= rho) m.pixels[y * kImage + x] = 1;
    }
  }
  return CameraView(k, pose, std::move(m));
}

}  // namespace

TEST_CASE("mask candidate filter against brute-force pixel distances") {
  const auto pts = hemisphere();
  const PointCloud cloud(pts, std::vector<std::vector<int>>(pts.size(), std::vector<int>{0}));
  const std::vector<CameraView> views{down_camera()};
  const double threshold = 3.0;
  const auto cand = mask_candidate_filter(cloud, views, threshold);

  const auto& contour = views[0].mask_contour;
  const double rho_rim = kFocal * kR / kHeight;
  std::vector<std::size_t> expected;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    Vec2 px;
    REQUIRE(views[0].project(pts[i], px));
    double best = 1e300;
    for (const auto& c : contour) best = std::min(best, (c - px).norm());
    if (best < threshold) expected.push_back(i);

    // Analytic envelope: the contour pixels lie within a pixel of the rim circle.
    const double radial = std::abs((px - Vec2(kImage / 2.0, kImage / 2.0)).norm() - rho_rim);
    if (radial < threshold - 1.0) CHECK(best < threshold);
    if (radial > threshold + 1.0) CHECK(best >= threshold);
  }
  CHECK(cand == expected);
  CHECK(cand.size() > 0);

  // Final boundary is a subset of the candidates.
  const BoundarySet b = extract_boundary(cloud, cand, 16, 2.0 * std::numbers::pi / 3.0);
  CHECK(std::includes(cand.begin(), cand.end(), b.indices.begin(), b.indices.end()));
}

TEST_CASE("mask filter trivial cases") {
  const std::vector<CameraView> views{down_camera()};
  // Camera point (x, -y, H - z) maps to pixel (f x / (H - z) + c, -f y / (H - z) + c).
  const double rho = kFocal * kR / kHeight;
  const Vec3 on_contour(rho * kHeight / kFocal, 0.0, 0.0);
  Vec2 px;
  REQUIRE(views[0].project(on_contour, px));
  const PointCloud cloud(std::vector<Vec3>{on_contour, Vec3(0, 0, 0), Vec3(0, 0, 0)},
                         std::vector<std::vector<int>>{{0}, {0}, {}});
  const auto cand = mask_candidate_filter(cloud, views, 3.0);
  REQUIRE(cand.size() == 1);
  CHECK(cand[0] == 0);

  try {
    mask_candidate_filter(cloud, {}, 3.0);
    FAIL("expected NoViews");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NoViews);
  }
  const PointCloud bad(std::vector<Vec3>{on_contour}, std::vector<std::vector<int>>{{3}});
  CHECK_THROWS_AS(mask_candidate_filter(bad, views, 3.0), Error);
}
