#include "oracles.hpp"
#include "sherdreg/errors.hpp"
#include "sherdreg/neighbor_index.hpp"

#include <doctest.h>

using namespace sherdreg;

TEST_CASE("trivial queries") {
  const NeighborIndex two(std::vector<Vec3>{{0, 0, 0}, {10, 0, 0}});
  const auto n = two.nearest(Vec3(4, 0, 0));
  CHECK(n.index == 0);
  CHECK(n.distance == 4.0);
  CHECK(two.nearest(Vec3(10, 0, 0)).index == 1);
  CHECK(two.nearest(Vec3(10, 0, 0)).distance == 0.0);
  CHECK(two.nearest(Vec3(5, 0, 0)).index == 0);  // tie -> lowest index
  CHECK_THROWS_AS(NeighborIndex(std::vector<Vec3>{}), Error);
}

TEST_CASE("nearest neighbour equals brute force") {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> u(-100.0, 100.0);
  std::vector<Vec3> pts(10000);
  for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng));
  // duplicates exercise the tie rule
  for (int i = 0; i < 50; ++i) pts.push_back(pts[static_cast<std::size_t>(i) * 7]);
  const NeighborIndex index(pts);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 q = i % 10 == 0 ? pts[static_cast<std::size_t>(i)] : Vec3(u(rng), u(rng), u(rng));
    const auto got = index.nearest(q);
    const auto ref = oracle::brute_nearest(pts, q);
    CHECK(got.index == ref.index);
    CHECK(got.distance == ref.distance);
  }
  CHECK(index.query_count() == 1000);
}

TEST_CASE("k-nearest and radius queries equal brute force") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<Vec3> pts(3000);
  for (auto& p : pts) p = Vec3(u(rng), u(rng), u(rng) * 0.1);
  const NeighborIndex index(pts);
  for (int t = 0; t < 50; ++t) {
    const Vec3 q(u(rng), u(rng), 0.0);
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < pts.size(); ++i) all.push_back({(pts[i] - q).squaredNorm(), i});
    std::sort(all.begin(), all.end());
    const auto knn = index.k_nearest(q, 17);
    REQUIRE(knn.size() == 17);
    for (std::size_t k = 0; k < 17; ++k) CHECK(knn[k].index == all[k].second);
    const auto rad = index.within_radius(q, 0.8);
    std::size_t expect = 0;
    while (expect < all.size() && all[expect].first <= 0.64) ++expect;
    REQUIRE(rad.size() == expect);
    for (std::size_t k = 0; k < expect; ++k) CHECK(rad[k].index == all[k].second);
  }
}
