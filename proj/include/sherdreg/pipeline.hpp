#pragma once

#include "sherdreg/boundary.hpp"
#include "sherdreg/config.hpp"
#include "sherdreg/contour.hpp"
#include "sherdreg/matching.hpp"
#include "sherdreg/metrics.hpp"
#include "sherdreg/registration.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace sherdreg {

/// Contour of one scan together with the data needed to lift it back to 3D.
struct ScanContour {
  Plane plane;
  double alpha = 0.0;
  Contour contour;
  ShapeDescriptor descriptor;
  std::vector<Vec3> contour_3d;  // scan point nearest to the plane lift of each contour vertex
};

ScanContour extract_scan_contour(const PointCloud& cloud, std::size_t n_c, double alpha = 0.0);

struct PairAlignment {
  DescriptorDistanceResult match;
  RigidTransform initial;  // back -> front
};

/// Descriptor match of one front/back pair followed by the contour
/// correspondence rigid fit.
PairAlignment align_pair(const ScanContour& front, const ScanContour& back);

/// Mask-filtered candidates refined by the angular-gap test when views are
/// given, the angular-gap test over every point otherwise.
BoundarySet scan_boundary(const PointCloud& cloud, const std::vector<CameraView>& views, const BoundaryConfig& config);

struct ScanInput {
  std::string id;
  PointCloud cloud;
  std::vector<CameraView> views;  // may be empty
};

struct FragmentOutcome {
  std::string front_id;
  std::string back_id;  // empty when the front scan could not be matched
  bool ok = false;
  std::string failed_stage;
  std::string error;
  DescriptorDistanceResult match;
  bool ambiguous = false;
  RigidTransform initial;
  RegistrationResult registration;
  std::size_t front_boundary_size = 0;
  std::size_t back_boundary_size = 0;
  std::size_t merged_size = 0;
  std::string merged_path;  // relative to the output directory
  std::optional<EvalReport> eval;
};

struct BatchReport {
  std::vector<FragmentOutcome> fragments;  // front order
  std::vector<std::string> warnings;
  std::string manifest_json;
  std::string summary;

  bool any_failed() const;
};

/// Whole batch in memory. `ground_truth`, when non-empty, holds one complete
/// model per front scan in that scan's frame. Merged clouds are written to
/// `out_dir` when it is set.
BatchReport run_pipeline(const std::vector<ScanInput>& front, const std::vector<ScanInput>& back,
                         const PipelineConfig& config, const std::vector<PointCloud>& ground_truth = {},
                         const std::optional<std::filesystem::path>& out_dir = std::nullopt);

/// Directory form: every *.ply in each directory (sorted by name); a scan
/// `x.ply` picks up camera metadata from `x.cameras.json` when present and
/// ground truth from `gt_dir/x.ply` for front scans. Writes merged PLYs,
/// manifest.json and summary.txt into `out_dir`. Throws SizeMismatch before
/// writing anything when the directories are empty or differ in count.
BatchReport run_pipeline(const std::filesystem::path& front_dir, const std::filesystem::path& back_dir,
                         const PipelineConfig& config, const std::filesystem::path& out_dir,
                         const std::optional<std::filesystem::path>& gt_dir = std::nullopt);

/// Sorted *.ply files of a directory.
std::vector<std::filesystem::path> list_scans(const std::filesystem::path& dir);

}  // namespace sherdreg
