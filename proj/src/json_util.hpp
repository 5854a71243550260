#pragma once

#include "sherdreg/errors.hpp"
#include "sherdreg/metrics.hpp"
#include "sherdreg/registration.hpp"

#include <json.hpp>

#include <cmath>

namespace sherdreg {

inline nlohmann::json to_json(const RigidTransform& t) {
  nlohmann::json rot = nlohmann::json::array();
  for (int r = 0; r < 3; ++r) rot.push_back({t.rotation(r, 0), t.rotation(r, 1), t.rotation(r, 2)});
  return {{"rotation", rot}, {"translation", {t.translation.x(), t.translation.y(), t.translation.z()}}};
}

inline RigidTransform transform_from_json(const nlohmann::json& j) {
  RigidTransform t;
  const auto& rot = j.at("rotation");
  const auto& tr = j.at("translation");
  if (rot.size() != 3 || tr.size() != 3) throw Error(ErrorCode::FormatError, "transform needs a 3x3 rotation and a 3-vector");
  for (std::size_t r = 0; r < 3; ++r) {
    if (rot[r].size() != 3) throw Error(ErrorCode::FormatError, "rotation rows need 3 entries");
    for (std::size_t c = 0; c < 3; ++c) t.rotation(static_cast<int>(r), static_cast<int>(c)) = rot[r][c].get<double>();
    t.translation(static_cast<int>(r)) = tr[r].get<double>();
  }
  if (!t.is_proper(1e-6)) throw Error(ErrorCode::FormatError, "rotation is not proper");
  return t;
}

// JSON has no infinity; non-finite values become null.
inline nlohmann::json finite_or_null(double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); }

inline nlohmann::json to_json(const RegistrationResult& r) {
  nlohmann::json trace = nlohmann::json::array();
  for (double v : r.objective_trace) trace.push_back(finite_or_null(v));
  return {{"transform", to_json(r.transform)},
          {"iterations", r.iterations_run},
          {"converged", r.converged},
          {"final_rms_mm", finite_or_null(r.final_rms)},
          {"reject_distance_mm", finite_or_null(r.reject_distance)},
          {"objective_trace", trace},
          {"correspondences", r.correspondence_counts},
          {"nn_queries", r.nn_queries}};
}

inline nlohmann::json to_json(const EvalReport& e) {
  return {{"accuracy_mm", e.accuracy_mm},
          {"completeness_pct", e.completeness_pct},
          {"mae_mm", e.mae_mm},
          {"sd_mm", e.sd_mm},
          {"completeness_threshold_mm", e.completeness_threshold_mm},
          {"accuracy_percentile", e.accuracy_percentile}};
}

}  // namespace sherdreg
