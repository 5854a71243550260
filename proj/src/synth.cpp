#include "sherdreg/synth.hpp"

#include "sherdreg/errors.hpp"
#include "sherdreg/matching.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

namespace sherdreg {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kMaxDraws = 100;

// Ray-casting point-in-polygon with edges bucketed by y.
class PolygonLocator {
 public:
  explicit PolygonLocator(const std::vector<Vec2>& ring) : ring_(ring) {
    ymin_ = ymax_ = ring.front().y();
    for (const auto& p : ring) {
      ymin_ = std::min(ymin_, p.y());
      ymax_ = std::max(ymax_, p.y());
    }
    const std::size_t nb = std::max<std::size_t>(1, ring.size() / 4);
    dy_ = std::max((ymax_ - ymin_) / static_cast<double>(nb), 1e-12);
    bins_.resize(nb);
    for (std::size_t i = 0; i < ring.size(); ++i) {
      const Vec2& a = ring[i];
      const Vec2& b = ring[(i + 1) % ring.size()];
      const std::size_t lo = bin(std::min(a.y(), b.y()));
      const std::size_t hi = bin(std::max(a.y(), b.y()));
      for (std::size_t k = lo; k <= hi; ++k) bins_[k].push_back(i);
    }
  }

  bool contains(const Vec2& q) const {
    if (q.y() < ymin_ || q.y() > ymax_) return false;
    bool inside = false;
    for (std::size_t i : bins_[bin(q.y())]) {
      const Vec2& a = ring_[i];
      const Vec2& b = ring_[(i + 1) % ring_.size()];
      if ((a.y() > q.y()) != (b.y() > q.y())) {
        const double x = a.x() + (q.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
        if (q.x() < x) inside = !inside;
      }
    }
    return inside;
  }

 private:
  std::size_t bin(double y) const {
    const double f = std::floor((y - ymin_) / dy_);
    return static_cast<std::size_t>(std::clamp(f, 0.0, static_cast<double>(bins_.size() - 1)));
  }

  std::vector<Vec2> ring_;
  double ymin_ = 0.0, ymax_ = 0.0, dy_ = 1.0;
  std::vector<std::vector<std::size_t>> bins_;
};

double max_radius(const std::vector<Vec2>& ring) {
  double r = 0.0;
  for (const auto& p : ring) r = std::max(r, p.norm());
  return r;
}

std::vector<Vec2> ccw(std::vector<Vec2> ring) {
  if (signed_area(ring) < 0.0) std::reverse(ring.begin(), ring.end());
  return ring;
}

// Lateral offset of the fracture face along the outward edge normal: ripples
// plus a bevel whose slope across the thickness swings along the edge.
struct Relief {
  double amplitude = 0.0;
  double bevel = 0.0;
  double phase1 = 0.0, phase2 = 0.0, phase3 = 0.0;
  double operator()(double u, double w) const {
    return amplitude * (std::sin(kTwoPi * u / 9.0 + phase1) + 0.5 * std::sin(kTwoPi * (u / 4.5 + w / 3.0) + phase2)) +
           bevel * w * std::sin(kTwoPi * u / 12.0 + phase3);
  }
};

// Geometry of the shell in the canonical frame.
class Shell {
 public:
  explicit Shell(const FragmentSpec& spec) : spec_(spec), outline_(ccw(spec.outline)) {
    cumulative_.assign(outline_.size() + 1, 0.0);
    for (std::size_t i = 0; i < outline_.size(); ++i) {
      cumulative_[i + 1] = cumulative_[i] + (outline_[(i + 1) % outline_.size()] - outline_[i]).norm();
    }
    std::mt19937_64 rng(mix_seed(spec.seed, 8));
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    relief_.amplitude = spec.relief_amplitude;
    relief_.bevel = spec.bevel;
    relief_.phase1 = phase(rng);
    relief_.phase2 = phase(rng);
    relief_.phase3 = phase(rng);
    outer_rim_ = rim_ring(0.0);
    inner_rim_ = rim_ring(spec.thickness);
    outer_locator_.emplace(outer_rim_);
    inner_locator_.emplace(inner_rim_);
  }

  double perimeter() const { return cumulative_.back(); }

  // Both face boundaries must stay simple once the fracture offset is applied.
  void check_rims() const {
    for (const auto* ring : {&outer_rim_, &inner_rim_}) {
      try {
        Polygon2 check(*ring);
      } catch (const Error&) {
        throw Error(ErrorCode::InvalidSpec, "fracture relief folds the rim: outline too tight for the thickness");
      }
    }
  }

  double outer_z(const Vec2& xy) const {
    if (spec_.flat()) return 0.0;
    const double r = spec_.shell_radius;
    return -r + std::sqrt(r * r - xy.squaredNorm());
  }
  double inner_z(const Vec2& xy) const {
    if (spec_.flat()) return -spec_.thickness;
    const double r = spec_.shell_radius;
    const double ri = r - spec_.thickness;
    return -r + std::sqrt(ri * ri - xy.squaredNorm());
  }

  bool outer_contains(const Vec2& xy) const { return outer_locator_->contains(xy); }
  bool inner_contains(const Vec2& xy) const { return inner_locator_->contains(xy); }

  // Point on the fracture strip at arc length u and depth w below the outer
  // surface. On a curved shell depth is measured along the sphere radius, so
  // the w = 0 and w = t rows lie exactly on the outer and inner surfaces.
  Vec3 strip_point(double u, double w) const {
    u = std::fmod(u, perimeter());
    if (u < 0.0) u += perimeter();
    const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
    const std::size_t i = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative_.begin()) - 1,
                                                outline_.size() - 1);
    const Vec2& a = outline_[i];
    const Vec2& b = outline_[(i + 1) % outline_.size()];
    const double len = cumulative_[i + 1] - cumulative_[i];
    const Vec2 dir = (b - a) / len;
    const Vec2 xy = a + dir * (u - cumulative_[i]) + relief_(u, w) * Vec2(dir.y(), -dir.x());
    if (spec_.flat()) return Vec3(xy.x(), xy.y(), -w);
    const Vec3 centre(0.0, 0.0, -spec_.shell_radius);
    const Vec3 radial = (Vec3(xy.x(), xy.y(), outer_z(xy)) - centre).normalized();
    return centre + (spec_.shell_radius - w) * radial;
  }

  // Jittered grid over the bounding box of both rims.
  template <class Keep, class Lift>
  void sample_face(std::mt19937_64& rng, double s, Keep keep, Lift lift, std::vector<Vec3>& out) const {
    Vec2 lo = outer_rim_.front(), hi = outer_rim_.front();
    for (const auto* ring : {&outer_rim_, &inner_rim_}) {
      for (const auto& p : *ring) {
        lo = lo.cwiseMin(p);
        hi = hi.cwiseMax(p);
      }
    }
    std::uniform_real_distribution<double> offset(0.0, s);
    std::uniform_real_distribution<double> jitter(-0.25 * s, 0.25 * s);
    const double ox = lo.x() + offset(rng), oy = lo.y() + offset(rng);
    for (double y = oy; y <= hi.y(); y += s) {
      for (double x = ox; x <= hi.x(); x += s) {
        const Vec2 q(x + jitter(rng), y + jitter(rng));
        if (keep(q)) out.push_back(lift(q));
      }
    }
  }

  // Strip rows; indices of the w = 0 and w = t rows are appended to the label lists.
  void sample_strip(std::mt19937_64& rng, double s, std::size_t base, std::vector<Vec3>& out,
                    std::vector<std::size_t>* outer_rim, std::vector<std::size_t>* inner_rim) const {
    const double t = spec_.thickness;
    const auto along = std::max<std::size_t>(8, static_cast<std::size_t>(std::llround(perimeter() / s)));
    const auto rows = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(t / s - 1e-9)));
    const double du = perimeter() / static_cast<double>(along);
    const double dw = t / static_cast<double>(rows);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::uniform_real_distribution<double> jitter(-0.25, 0.25);
    for (std::size_t j = 0; j <= rows; ++j) {
      const double shift = unit(rng);
      for (std::size_t k = 0; k < along; ++k) {
        const double u = (static_cast<double>(k) + shift + jitter(rng)) * du;
        double w = static_cast<double>(j) * dw;
        if (j != 0 && j != rows) w += jitter(rng) * dw;
        if (j == 0 && outer_rim) outer_rim->push_back(base + out.size());
        if (j == rows && inner_rim) inner_rim->push_back(base + out.size());
        out.push_back(strip_point(u, w));
      }
    }
  }

  double sample_spacing() const { return spec_.sample_spacing; }

 private:
  const FragmentSpec& spec_;
  std::vector<Vec2> outline_;
  std::vector<double> cumulative_;
  Relief relief_;
  std::vector<Vec2> outer_rim_, inner_rim_;
  std::optional<PolygonLocator> outer_locator_, inner_locator_;

  std::vector<Vec2> rim_ring(double w) const {
    std::vector<Vec2> ring;
    ring.reserve(outline_.size());
    for (std::size_t i = 0; i < outline_.size(); ++i) ring.push_back(strip_point(cumulative_[i], w).head<2>());
    return ring;
  }
};

void add_noise(std::vector<Vec3>& pts, double sigma, std::uint64_t seed) {
  if (sigma <= 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, sigma);
  for (auto& p : pts) p += Vec3(n(rng), n(rng), n(rng));
}

RigidTransform random_planar_pose(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, kTwoPi);
  std::uniform_real_distribution<double> shift(-50.0, 50.0);
  const double a = angle(rng);
  const double tx = shift(rng);
  const double ty = shift(rng);
  return from_axis_angle(Vec3::UnitZ(), a, Vec3(tx, ty, 0.0));
}

double estimated_overlap(const std::vector<Vec2>& outline, double thickness, double s) {
  const double p = [&] {
    double sum = 0.0;
    for (std::size_t i = 0; i < outline.size(); ++i) sum += (outline[(i + 1) % outline.size()] - outline[i]).norm();
    return sum;
  }();
  const double a = std::abs(signed_area(outline));
  const double rows = std::max(1.0, std::ceil(thickness / s - 1e-9)) + 1.0;
  const double strip = p / s * rows;
  return strip / (strip + a / (s * s));
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  auto splitmix = [](std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  };
  return splitmix(splitmix(splitmix(seed) ^ a) ^ (b * 0x632be59bd9b4e019ULL));
}

void FragmentSpec::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); };
  if (outline.size() < 3) fail("outline needs at least 3 vertices");
  try {
    Polygon2 check(outline);
  } catch (const Error& e) {
    fail(std::string("outline is not a simple polygon (") + e.what() + ")");
  }
  if (!(thickness > 0.0) || !std::isfinite(thickness)) fail("thickness must be positive and finite");
  if (!(shell_radius > 0.0)) fail("shell radius must be positive");
  if (!(thickness < shell_radius)) fail("thickness must be smaller than the shell radius");
  if (!(sample_spacing > 0.0) || !std::isfinite(sample_spacing)) fail("sample spacing must be positive");
  if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) fail("noise sigma must be non-negative");
  if (!(relief_amplitude >= 0.0) || !std::isfinite(relief_amplitude)) fail("relief amplitude must be non-negative");
  if (!(bevel >= 0.0) || !std::isfinite(bevel)) fail("bevel must be non-negative");
  if (!flat() && max_radius(outline) >= 0.9 * shell_radius) fail("outline does not fit on the shell");
  Shell(*this).check_rims();
}

SyntheticFragment generate_fragment(const FragmentSpec& spec) {
  spec.validate();
  const Shell shell(spec);
  const double s = spec.sample_spacing;

  std::vector<Vec3> front, back;
  std::vector<std::size_t> front_rim, back_rim, front_strip, back_strip;

  {
    std::mt19937_64 rng(mix_seed(spec.seed, 1));
    shell.sample_face(
        rng, s, [&](const Vec2& q) { return shell.outer_contains(q); },
        [&](const Vec2& q) { return Vec3(q.x(), q.y(), shell.outer_z(q)); }, front);
    const std::size_t first = front.size();
    std::mt19937_64 srng(mix_seed(spec.seed, 2));
    std::vector<Vec3> strip;
    shell.sample_strip(srng, s, first, strip, nullptr, &front_rim);
    front.insert(front.end(), strip.begin(), strip.end());
    front_strip.resize(strip.size());
    std::iota(front_strip.begin(), front_strip.end(), first);
  }
  {
    std::mt19937_64 rng(mix_seed(spec.seed, 3));
    shell.sample_face(
        rng, s, [&](const Vec2& q) { return shell.inner_contains(q); },
        [&](const Vec2& q) { return Vec3(q.x(), q.y(), shell.inner_z(q)); }, back);
    const std::size_t first = back.size();
    std::mt19937_64 srng(mix_seed(spec.seed, 4));
    std::vector<Vec3> strip;
    shell.sample_strip(srng, s, first, strip, &back_rim, nullptr);
    back.insert(back.end(), strip.begin(), strip.end());
    back_strip.resize(strip.size());
    std::iota(back_strip.begin(), back_strip.end(), first);
  }

  SyntheticFragment out;
  FragmentTruth& truth = out.truth;
  truth.front_overlap = static_cast<double>(front_strip.size()) / static_cast<double>(front.size());
  truth.back_overlap = static_cast<double>(back_strip.size()) / static_cast<double>(back.size());
  if (!(truth.front_overlap > 0.0 && truth.front_overlap <= 0.2 && truth.back_overlap > 0.0 &&
        truth.back_overlap <= 0.2)) {
    throw Error(ErrorCode::InvalidSpec, "strip overlap fraction outside (0, 0.2]: thickness too large for the outline");
  }

  add_noise(front, spec.noise_sigma, mix_seed(spec.seed, 6));
  add_noise(back, spec.noise_sigma, mix_seed(spec.seed, 7));

  std::mt19937_64 pose_rng(mix_seed(spec.seed, 5));
  truth.front_pose = random_planar_pose(pose_rng);
  const RigidTransform flip = from_axis_angle(Vec3::UnitX(), std::numbers::pi);
  truth.back_pose = random_planar_pose(pose_rng) * flip;

  for (auto& p : front) p = truth.front_pose(p);
  for (auto& p : back) p = truth.back_pose(p);

  truth.front_boundary = BoundarySet::from_unsorted(std::move(front_rim));
  truth.back_boundary = BoundarySet::from_unsorted(std::move(back_rim));
  truth.front_strip = std::move(front_strip);
  truth.back_strip = std::move(back_strip);
  out.front = PointCloud(std::move(front));
  out.back = PointCloud(std::move(back));
  return out;
}

PointCloud sample_complete_model(const FragmentSpec& spec, const RigidTransform& front_pose, double spacing,
                                 std::uint64_t seed) {
  spec.validate();
  require(spacing > 0.0, "spacing must be positive");
  const Shell shell(spec);
  std::vector<Vec3> pts;
  std::mt19937_64 rng(seed);
  shell.sample_face(
      rng, spacing, [&](const Vec2& q) { return shell.outer_contains(q); },
      [&](const Vec2& q) { return Vec3(q.x(), q.y(), shell.outer_z(q)); }, pts);
  shell.sample_face(
      rng, spacing, [&](const Vec2& q) { return shell.inner_contains(q); },
      [&](const Vec2& q) { return Vec3(q.x(), q.y(), shell.inner_z(q)); }, pts);
  shell.sample_strip(rng, spacing, pts.size(), pts, nullptr, nullptr);
  for (auto& p : pts) p = front_pose(p);
  return PointCloud(std::move(pts));
}

std::vector<Vec3> strip_curve(const FragmentSpec& spec, double depth, std::size_t samples) {
  spec.validate();
  require(samples > 0, "need at least one sample");
  require(depth >= 0.0 && depth <= spec.thickness, "depth must lie within the thickness");
  const Shell shell(spec);
  std::vector<Vec3> out;
  out.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    out.push_back(shell.strip_point(shell.perimeter() * static_cast<double>(i) / static_cast<double>(samples), depth));
  }
  return out;
}

std::vector<Vec2> random_star_outline(std::mt19937_64& rng, double base_radius, double radius_min,
                                      double radius_max, int control_points, std::size_t vertices) {
  require(control_points >= 3, "star outline needs at least 3 control points");
  require(vertices >= 16, "star outline needs at least 16 vertices");
  require(base_radius > 0.0 && radius_min > 0.0 && radius_min <= radius_max, "invalid outline radii");
  const auto m = static_cast<std::size_t>(control_points);
  std::uniform_real_distribution<double> jitter(-0.3, 0.3);
  std::vector<double> phi(m), r(m);
  for (std::size_t k = 0; k < m; ++k) {
    phi[k] = (static_cast<double>(k) + jitter(rng)) * kTwoPi / static_cast<double>(m);
    r[k] = std::clamp(base_radius * (1.0 + jitter(rng)), radius_min, radius_max);
  }
  auto rr = [&](std::ptrdiff_t k) { return r[static_cast<std::size_t>(((k % static_cast<std::ptrdiff_t>(m)) + m) % m)]; };
  auto ph = [&](std::ptrdiff_t k) {
    const auto mm = static_cast<std::ptrdiff_t>(m);
    const std::ptrdiff_t wrap = (k >= 0 ? k / mm : (k - mm + 1) / mm);
    return phi[static_cast<std::size_t>(k - wrap * mm)] + kTwoPi * static_cast<double>(wrap);
  };

  std::vector<Vec2> out(vertices);
  std::ptrdiff_t k = 0;
  for (std::size_t v = 0; v < vertices; ++v) {
    double theta = kTwoPi * static_cast<double>(v) / static_cast<double>(vertices);
    if (theta < ph(0)) theta += kTwoPi;
    while (ph(k + 1) <= theta) ++k;
    while (ph(k) > theta) --k;
    const double t = (theta - ph(k)) / (ph(k + 1) - ph(k));
    const double p0 = rr(k - 1), p1 = rr(k), p2 = rr(k + 1), p3 = rr(k + 2);
    const double t2 = t * t, t3 = t2 * t;
    double radius = 0.5 * (2.0 * p1 + (-p0 + p2) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t2 +
                           (-p0 + 3.0 * p1 - 3.0 * p2 + p3) * t3);
    radius = std::max(radius, 0.3 * base_radius);
    const double a = kTwoPi * static_cast<double>(v) / static_cast<double>(vertices);
    out[v] = Vec2(radius * std::cos(a), radius * std::sin(a));
  }
  return out;
}

ShapeDescriptor outline_descriptor(const std::vector<Vec2>& outline, std::size_t n_c) {
  return descriptor(resample_uniform(Polygon2(outline), n_c));
}

std::vector<PointCloud> SyntheticBatch::back_batch() const {
  std::vector<PointCloud> out(fragments.size());
  for (std::size_t i = 0; i < fragments.size(); ++i) out[pairing[i]] = fragments[i].back;
  return out;
}

SyntheticBatch generate_batch(std::size_t n, std::uint64_t seed, const SpecRanges& ranges) {
  require(n >= 1 && n <= 20, "batch size must lie in [1, 20]");
  require(ranges.outline_radius_min > 0.0 && ranges.outline_radius_min <= ranges.outline_radius_max,
          "invalid outline radius range");
  require(ranges.shell_radius_min > 0.0 && ranges.shell_radius_min <= ranges.shell_radius_max,
          "invalid shell radius range");
  require(ranges.thickness_min > 0.0 && ranges.thickness_min <= ranges.thickness_max, "invalid thickness range");
  require(ranges.max_overlap > 0.0 && ranges.max_overlap <= 0.2, "max overlap must lie in (0, 0.2]");

  SyntheticBatch batch;
  std::vector<ShapeDescriptor> accepted;
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  for (std::size_t i = 0; i < n; ++i) {
    bool placed = false;
    for (int attempt = 0; attempt < kMaxDraws && !placed; ++attempt) {
      std::mt19937_64 rng(mix_seed(seed, i + 1, static_cast<std::uint64_t>(attempt)));
      FragmentSpec spec;
      spec.sample_spacing = ranges.sample_spacing;
      spec.noise_sigma = ranges.noise_sigma;
      spec.relief_amplitude = ranges.relief_amplitude;
      spec.bevel = ranges.bevel;
      spec.seed = mix_seed(seed, 1000 + i, static_cast<std::uint64_t>(attempt));
      const bool flat = unit(rng) < ranges.flat_probability;
      spec.shell_radius = flat ? std::numeric_limits<double>::infinity()
                               : ranges.shell_radius_min + unit(rng) * (ranges.shell_radius_max - ranges.shell_radius_min);

      const bool near_copy = ranges.adversarial && i == 1;
      double base = 0.0;
      if (near_copy) {
        const auto& src = batch.specs[0].outline;
        base = batch.specs[0].thickness / ranges.max_thickness_ratio;
        std::uniform_real_distribution<double> ang(0.0, kTwoPi);
        const double psi = ang(rng);
        spec.outline.reserve(src.size());
        for (const auto& p : src) {
          const double a = std::atan2(p.y(), p.x());
          spec.outline.push_back(p * (1.0 + 0.005 * std::sin(3.0 * a + psi)));
        }
        spec.shell_radius = batch.specs[0].shell_radius;
        spec.seed = batch.specs[0].seed;  // same relief and sampling streams
      } else {
        const double rmax = flat ? ranges.outline_radius_max
                                 : std::min(ranges.outline_radius_max, 0.5 * spec.shell_radius);
        if (rmax < ranges.outline_radius_min) continue;
        base = ranges.outline_radius_min + unit(rng) * (rmax - ranges.outline_radius_min);
        std::uniform_int_distribution<int> controls(7, 12);
        spec.outline = random_star_outline(rng, base, ranges.outline_radius_min, rmax, controls(rng));
      }

      // Thickness bounded by the range, the thickness ratio and the overlap budget.
      double t_cap = std::min(ranges.thickness_max, ranges.max_thickness_ratio * base);
      while (t_cap >= ranges.thickness_min &&
             estimated_overlap(spec.outline, t_cap, spec.sample_spacing) > 0.9 * ranges.max_overlap) {
        t_cap -= 0.5 * spec.sample_spacing;
      }
      if (t_cap < ranges.thickness_min) continue;
      spec.thickness = ranges.thickness_min + unit(rng) * (t_cap - ranges.thickness_min);
      if (near_copy) spec.thickness = batch.specs[0].thickness;
      if (!flat && spec.thickness >= spec.shell_radius) continue;

      ShapeDescriptor d;
      try {
        spec.validate();
        d = outline_descriptor(spec.outline, ranges.n_c);
      } catch (const Error&) {
        continue;
      }
      bool distinct = true;
      for (std::size_t j = 0; j < accepted.size() && distinct; ++j) {
        if (near_copy && j == 0) continue;
        const double dist = std::min(descriptor_distance(d, accepted[j]).distance,
                                     descriptor_distance(accepted[j], d).distance);
        distinct = dist > ranges.distinctness_floor;
      }
      if (!distinct) continue;

      accepted.push_back(std::move(d));
      batch.specs.push_back(std::move(spec));
      placed = true;
    }
    if (!placed) {
      throw Error(ErrorCode::DistinctnessFailure,
                  "fragment " + std::to_string(i) + ": no admissible outline after " + std::to_string(kMaxDraws) +
                      " draws");
    }
  }

  for (const auto& spec : batch.specs) batch.fragments.push_back(generate_fragment(spec));

  batch.pairing.resize(n);
  std::iota(batch.pairing.begin(), batch.pairing.end(), std::size_t{0});
  std::mt19937_64 shuffle_rng(mix_seed(seed, 0xb4c7));
  std::shuffle(batch.pairing.begin(), batch.pairing.end(), shuffle_rng);
  return batch;
}

}  // namespace sherdreg
