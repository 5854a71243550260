#pragma once

#include "sherdreg/geometry.hpp"

#include <string>
#include <vector>

namespace sherdreg {

inline constexpr double kDefaultCompletenessThreshold = 0.5;  // mm
inline constexpr double kDefaultAccuracyPercentile = 90.0;

/// Reconstruction quality against a ground-truth point set.
struct EvalReport {
  double accuracy_mm = 0.0;       // percentile of reconstruction -> GT distances
  double completeness_pct = 0.0;  // GT points within threshold of the reconstruction
  double mae_mm = 0.0;
  double sd_mm = 0.0;
  double completeness_threshold_mm = kDefaultCompletenessThreshold;
  double accuracy_percentile = kDefaultAccuracyPercentile;
};

/// Point-to-nearest-point metrics. `recon` must already be aligned to `gt`.
/// Throws EmptyCloud when either cloud is empty.
EvalReport evaluate(const PointCloud& recon, const PointCloud& gt,
                    double completeness_threshold = kDefaultCompletenessThreshold,
                    double accuracy_percentile = kDefaultAccuracyPercentile);

/// Linear-interpolated percentile (p in [0, 100]).
double percentile(std::vector<double> values, double p);

struct FragmentEval {
  std::string id;
  EvalReport report;
};

/// Arithmetic mean of the per-fragment metrics.
EvalReport batch_mean(const std::vector<FragmentEval>& rows);

/// "id,accuracy_mm,completeness_pct,mae_mm,sd_mm" rows plus a trailing
/// "Mean" row.
std::string format_eval_csv(const std::vector<FragmentEval>& rows);

}  // namespace sherdreg
