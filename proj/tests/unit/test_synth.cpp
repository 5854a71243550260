#include "oracles.hpp"
#include "sherdreg/errors.hpp"
#include "sherdreg/matching.hpp"
#include "sherdreg/pipeline.hpp"
#include "sherdreg/synth.hpp"

#include <doctest.h>

#include <algorithm>
#include <limits>
#include <set>

using namespace sherdreg;

namespace {

constexpr double kFlat = std::numeric_limits<double>::infinity();

FragmentSpec make_spec(std::uint64_t seed, double shell_radius, double noise, double thickness = 1.0) {
  std::mt19937_64 rng(seed);
  FragmentSpec spec;
  spec.outline = random_star_outline(rng, 25.0, 10.0, 75.0, 8);
  spec.shell_radius = shell_radius;
  spec.thickness = thickness;
  spec.sample_spacing = 0.5;
  spec.noise_sigma = noise;
  spec.seed = seed;
  return spec;
}

std::vector<Vec3> subset(const PointCloud& cloud, const std::vector<std::size_t>& idx, const RigidTransform& t) {
  std::vector<Vec3> out;
  for (auto i : idx) out.push_back(t(cloud[i]));
  return out;
}

double directed_max(const std::vector<Vec3>& from, const std::vector<Vec3>& to) {
  double worst = 0.0;
  for (const auto& p : from) worst = std::max(worst, oracle::brute_nearest(to, p).distance);
  return worst;
}

bool same_points(const PointCloud& a, const PointCloud& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("generation is deterministic in the seed") {
  const auto spec = make_spec(3, 120.0, 0.05);
  const auto a = generate_fragment(spec);
  const auto b = generate_fragment(spec);
  CHECK(same_points(a.front, b.front));
  CHECK(same_points(a.back, b.back));
  CHECK(a.truth.front_boundary.indices == b.truth.front_boundary.indices);

  auto other = spec;
  other.seed = 4;
  CHECK_FALSE(same_points(generate_fragment(other).front, a.front));

  const auto x = generate_batch(4, 77);
  const auto y = generate_batch(4, 77);
  CHECK(x.pairing == y.pairing);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(same_points(x.fragments[i].front, y.fragments[i].front));
    CHECK(same_points(x.fragments[i].back, y.fragments[i].back));
  }
}

TEST_CASE("overlap fraction matches a recount of the strip labels") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto f = generate_fragment(make_spec(seed, seed == 2 ? kFlat : 90.0, 0.05));
    const auto& t = f.truth;
    const std::set<std::size_t> fs(t.front_strip.begin(), t.front_strip.end());
    const std::set<std::size_t> bs(t.back_strip.begin(), t.back_strip.end());
    CHECK(fs.size() == t.front_strip.size());
    CHECK(*fs.rbegin() < f.front.size());
    CHECK(*bs.rbegin() < f.back.size());
    CHECK(t.front_overlap == doctest::Approx(static_cast<double>(fs.size()) / f.front.size()).epsilon(1e-15));
    CHECK(t.back_overlap == doctest::Approx(static_cast<double>(bs.size()) / f.back.size()).epsilon(1e-15));
    CHECK(t.front_overlap > 0.0);
    CHECK(t.front_overlap <= 0.2);
    for (auto i : t.front_boundary.indices) CHECK(fs.count(i) == 1);
    for (auto i : t.back_boundary.indices) CHECK(bs.count(i) == 1);
  }
}

TEST_CASE("labelled rims lie on the analytic rim curves") {
  for (double noise : {0.0, 0.05}) {
    const auto spec = make_spec(5, 80.0, noise);
    const auto f = generate_fragment(spec);
    const double s = spec.sample_spacing;
    const Vec3 centre(0.0, 0.0, -spec.shell_radius);

    const auto inner = strip_curve(spec, spec.thickness, 4000);
    const auto outer = strip_curve(spec, 0.0, 4000);
    const auto front_rim = subset(f.front, f.truth.front_boundary.indices, f.truth.front_pose.inverse());
    const auto back_rim = subset(f.back, f.truth.back_boundary.indices, f.truth.back_pose.inverse());
    CHECK(directed_max(front_rim, inner) < 1.5 * s);
    CHECK(directed_max(back_rim, outer) < 1.5 * s);

    if (noise == 0.0) {
      // Independent of the curve sampler: rims sit on the inner and outer spheres.
      for (const auto& p : front_rim) CHECK((p - centre).norm() == doctest::Approx(spec.shell_radius - spec.thickness));
      for (const auto& p : back_rim) CHECK((p - centre).norm() == doctest::Approx(spec.shell_radius));
    }
  }
}

TEST_CASE("strips agree under the ground-truth transform") {
  for (double rs : {kFlat, 150.0}) {
    const double sigma = 0.05;
    const auto spec = make_spec(9, rs, sigma);
    const auto f = generate_fragment(spec);
    const RigidTransform gt = f.truth.back_to_front();
    const auto front_strip = subset(f.front, f.truth.front_strip, RigidTransform::identity());
    const auto back_strip = subset(f.back, f.truth.back_strip, gt);
    const double h = std::max(directed_max(front_strip, back_strip), directed_max(back_strip, front_strip));
    CHECK(h < 2.0 * spec.sample_spacing + 6.0 * sigma);
  }
}

TEST_CASE("flat noise-free pair: strip-to-strip RMS under the known flip") {
  const auto spec = make_spec(11, kFlat, 0.0, 1.5);
  const auto f = generate_fragment(spec);
  const RigidTransform gt = f.truth.back_to_front();
  // Under the ground truth the back's inner face sits one thickness below the
  // front's outer face.
  const RigidTransform to_canonical = f.truth.front_pose.inverse() * gt;
  std::vector<char> in_strip(f.back.size(), 0);
  for (auto i : f.truth.back_strip) in_strip[i] = 1;
  for (std::size_t i = 0; i < f.back.size(); ++i) {
    if (!in_strip[i]) CHECK(to_canonical(f.back[i]).z() == doctest::Approx(-spec.thickness));
  }
  const auto front_strip = subset(f.front, f.truth.front_strip, RigidTransform::identity());
  const auto back_strip = subset(f.back, f.truth.back_strip, gt);
  double sum = 0.0;
  for (const auto& p : back_strip) sum += std::pow(oracle::brute_nearest(front_strip, p).distance, 2);
  CHECK(std::sqrt(sum / back_strip.size()) < spec.sample_spacing / 2.0);
}

TEST_CASE("invalid specs are rejected") {
  auto spec = make_spec(1, 50.0, 0.0);
  auto bad = spec;
  bad.thickness = 60.0;
  CHECK_THROWS_AS(generate_fragment(bad), Error);
  bad = spec;
  bad.outline = {{0, 0}, {10, 10}, {10, 0}, {0, 10}};
  try {
    generate_fragment(bad);
    FAIL("expected InvalidSpec");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpec);
  }
  bad = spec;
  bad.sample_spacing = 0.0;
  CHECK_THROWS_AS(generate_fragment(bad), Error);
  bad = make_spec(1, kFlat, 0.0, 8.0);  // strip would dominate a 25 mm sherd
  try {
    generate_fragment(bad);
    FAIL("expected InvalidSpec");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidSpec);
  }
}

TEST_CASE("batch size bounds and the trivial batch") {
  for (std::size_t n : {0u, 21u}) {
    try {
      generate_batch(n, 1);
      FAIL("expected PreconditionViolation");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::PreconditionViolation);
    }
  }
  const auto one = generate_batch(1, 5);
  REQUIRE(one.pairing.size() == 1);
  CHECK(one.pairing[0] == 0);
}

TEST_CASE("impossible distinctness floor raises DistinctnessFailure") {
  SpecRanges ranges;
  ranges.distinctness_floor = 1e6;
  try {
    generate_batch(2, 3, ranges);
    FAIL("expected DistinctnessFailure");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DistinctnessFailure);
  }
}

TEST_CASE("back batch follows the recorded pairing and matching recovers it") {
  const auto batch = generate_batch(8, 2024);
  std::vector<std::size_t> sorted = batch.pairing;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 8; ++i) CHECK(sorted[i] == i);

  const auto backs = batch.back_batch();
  for (std::size_t i = 0; i < 8; ++i) CHECK(same_points(backs[batch.pairing[i]], batch.fragments[i].back));

  std::vector<ShapeDescriptor> fd, bd;
  for (std::size_t i = 0; i < 8; ++i) {
    fd.push_back(extract_scan_contour(batch.fragments[i].front, 200).descriptor);
    bd.push_back(extract_scan_contour(backs[i], 200).descriptor);
  }
  const auto a = match_batches(fd, bd);
  for (std::size_t i = 0; i < 8; ++i) CHECK(a.pairs[i].back == batch.pairing[i]);
}

TEST_CASE("adversarial preset produces a near-duplicate outline") {
  SpecRanges ranges;
  ranges.adversarial = true;
  const auto batch = generate_batch(4, 8, ranges);
  const auto d0 = outline_descriptor(batch.specs[0].outline);
  const auto d1 = outline_descriptor(batch.specs[1].outline);
  CHECK(descriptor_distance(d0, d1).distance < 0.3);
  const auto d2 = outline_descriptor(batch.specs[2].outline);
  CHECK(descriptor_distance(d0, d2).distance > ranges.distinctness_floor);
}
