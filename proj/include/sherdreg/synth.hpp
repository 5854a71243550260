#pragma once

#include "sherdreg/boundary.hpp"
#include "sherdreg/contour.hpp"
#include "sherdreg/geometry.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

namespace sherdreg {

/// Parameters of one synthetic sherd. The canonical frame puts the outer
/// surface apex at the origin with the shell bulging towards +z; the parent
/// sphere is centred at (0, 0, -shell_radius). An infinite radius gives a
/// flat plate with the outer face at z = 0.
struct FragmentSpec {
  std::vector<Vec2> outline;  // star-shaped simple polygon, counter-clockwise
  double shell_radius = std::numeric_limits<double>::infinity();
  double thickness = 2.0;
  double sample_spacing = 0.5;
  double noise_sigma = 0.0;
  double relief_amplitude = 0.15;  // fracture-strip relief, mm
  double bevel = 0.8;              // peak slope of the fracture face across the thickness
  std::uint64_t seed = 0;

  bool flat() const { return !std::isfinite(shell_radius); }
  /// Throws InvalidSpec.
  void validate() const;
};

/// Ground truth for one fragment. Poses map the canonical frame into each
/// scan's frame; label indices refer to the generated clouds.
struct FragmentTruth {
  RigidTransform front_pose;
  RigidTransform back_pose;
  BoundarySet front_boundary;  // free rim of the front scan (strip edge on the inner side)
  BoundarySet back_boundary;   // free rim of the back scan (strip edge on the outer side)
  std::vector<std::size_t> front_strip;
  std::vector<std::size_t> back_strip;
  double front_overlap = 0.0;  // strip share of the front scan
  double back_overlap = 0.0;

  /// Transform taking the back scan into the front scan's frame.
  RigidTransform back_to_front() const { return front_pose * back_pose.inverse(); }
};

struct SyntheticFragment {
  PointCloud front;
  PointCloud back;
  FragmentTruth truth;
};

/// Front scan = outer surface + fracture strip, back scan = inner surface +
/// the same strip sampled independently; the back is flipped about an
/// in-plane axis and both receive random planar poses.
SyntheticFragment generate_fragment(const FragmentSpec& spec);

/// Noise-free complete model (both faces and the strip) in the front scan's
/// frame, sampled independently of the scans.
PointCloud sample_complete_model(const FragmentSpec& spec, const RigidTransform& front_pose, double spacing,
                                 std::uint64_t seed);

/// Fracture strip at a fixed depth below the outer surface (0 gives the outer
/// rim, the thickness gives the inner rim), canonical frame, `samples` points
/// evenly spaced in arc length.
std::vector<Vec3> strip_curve(const FragmentSpec& spec, double depth, std::size_t samples);

/// Star polygon: `control_points` radii drawn around `base_radius` (+-30%,
/// clamped to [radius_min, radius_max]) and interpolated periodically.
std::vector<Vec2> random_star_outline(std::mt19937_64& rng, double base_radius, double radius_min,
                                      double radius_max, int control_points, std::size_t vertices = 720);

/// Descriptor of an outline polygon resampled to n_c points.
ShapeDescriptor outline_descriptor(const std::vector<Vec2>& outline, std::size_t n_c = kDefaultContourSamples);

struct SpecRanges {
  double outline_radius_min = 10.0;
  double outline_radius_max = 75.0;
  double shell_radius_min = 50.0;
  double shell_radius_max = 300.0;
  double flat_probability = 0.0;
  double thickness_min = 0.3;
  double thickness_max = 10.0;
  double max_thickness_ratio = 0.05;  // thickness <= ratio * base outline radius
  double max_overlap = 0.2;           // strip share of a scan, estimated before sampling
  double sample_spacing = 0.5;
  double noise_sigma = 0.05;
  double relief_amplitude = 0.15;
  double bevel = 0.8;
  double distinctness_floor = 1.0;  // radians
  bool adversarial = false;         // fragment 1 becomes a near-copy of fragment 0
  std::size_t n_c = kDefaultContourSamples;
};

struct SyntheticBatch {
  std::vector<SyntheticFragment> fragments;  // front order; fragment i's back is stored at back_order[pairing[i]]
  std::vector<std::size_t> pairing;          // front index -> back index
  std::vector<FragmentSpec> specs;

  PointCloud front(std::size_t i) const { return fragments[i].front; }
  /// Back batch in its shuffled order.
  std::vector<PointCloud> back_batch() const;
};

/// n distinct fragments (pairwise outline descriptor distance above the
/// floor, up to 100 draws per fragment) with a seeded shuffle of the backs.
SyntheticBatch generate_batch(std::size_t n, std::uint64_t seed, const SpecRanges& ranges = {});

/// Deterministic sub-seed derivation.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

}  // namespace sherdreg
