#pragma once

#include "sherdreg/boundary.hpp"
#include "sherdreg/contour.hpp"
#include "sherdreg/metrics.hpp"
#include "sherdreg/registration.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace sherdreg {

/// Every tunable of the batch pipeline. The file form is one `key = value`
/// per line; '#' starts a comment.
struct PipelineConfig {
  std::size_t n_c = kDefaultContourSamples;
  double alpha = 0.0;  // mm; 0 selects the spacing-based default
  BoundaryConfig boundary;
  BBICPConfig bbicp;
  double completeness_threshold = kDefaultCompletenessThreshold;
  double accuracy_percentile = kDefaultAccuracyPercentile;
  unsigned jobs = 1;
  std::uint64_t seed = 0;

  /// Throws PreconditionViolation on out-of-range values.
  void validate() const;

  std::string to_text() const;
  /// Keys absent from the text keep their current values; unknown keys are
  /// a FormatError.
  void apply_text(const std::string& text);
  static PipelineConfig from_text(const std::string& text);

  static PipelineConfig load(const std::filesystem::path& path);
  void save(const std::filesystem::path& path) const;

  friend bool operator==(const PipelineConfig& a, const PipelineConfig& b) { return a.to_text() == b.to_text(); }
};

}  // namespace sherdreg
