#include "sherdreg/pipeline.hpp"

#include "json_util.hpp"
#include "sherdreg/assignment.hpp"
#include "sherdreg/camera_io.hpp"
#include "sherdreg/errors.hpp"
#include "sherdreg/neighbor_index.hpp"
#include "sherdreg/ply_io.hpp"
#include "sherdreg/serialization.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <functional>
#include <sstream>
#include <thread>

namespace sherdreg {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

struct ContourSlot {
  std::optional<ScanContour> contour;
  std::string error;
};

std::string describe(const std::exception& e) { return e.what(); }

// Assignment over the scans whose contours succeeded. Unequal counts are
// padded with dummy rows/columns that cost more than any real pair.
BatchAssignment match_available(const std::vector<ContourSlot>& front, const std::vector<ContourSlot>& back,
                                std::vector<std::size_t>& front_map, std::vector<std::size_t>& back_map) {
  std::vector<ShapeDescriptor> fd, bd;
  for (std::size_t i = 0; i < front.size(); ++i) {
    if (front[i].contour) {
      front_map.push_back(i);
      fd.push_back(front[i].contour->descriptor);
    }
  }
  for (std::size_t j = 0; j < back.size(); ++j) {
    if (back[j].contour) {
      back_map.push_back(j);
      bd.push_back(back[j].contour->descriptor);
    }
  }
  if (fd.empty() || bd.empty()) return {};
  if (fd.size() == bd.size()) return match_batches(fd, bd);

  const std::size_t n = std::max(fd.size(), bd.size());
  Eigen::MatrixXd dist(fd.size(), bd.size());
  std::vector<std::vector<DescriptorDistanceResult>> res(fd.size(), std::vector<DescriptorDistanceResult>(bd.size()));
  double worst = 0.0;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    for (std::size_t j = 0; j < bd.size(); ++j) {
      res[i][j] = descriptor_distance(fd[i], bd[j]);
      dist(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = res[i][j].distance;
      worst = std::max(worst, res[i][j].distance);
    }
  }
  Eigen::MatrixXd padded = Eigen::MatrixXd::Constant(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n),
                                                     10.0 * worst + 1.0);
  padded.topLeftCorner(dist.rows(), dist.cols()) = dist;
  const auto cols = solve_assignment(padded);
  BatchAssignment out;
  out.distances = dist;
  for (std::size_t i = 0; i < fd.size(); ++i) {
    const auto j = static_cast<std::size_t>(cols[i]);
    if (j >= bd.size()) continue;
    MatchedPair p;
    p.front = i;
    p.back = j;
    p.match = res[i][j];
    double runner = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < bd.size(); ++k) {
      if (k != j) runner = std::min(runner, res[i][k].distance);
    }
    p.ambiguous = runner <= (1.0 + kAmbiguityMargin) * p.match.distance;
    out.pairs.push_back(p);
  }
  return out;
}

json transform_or_null(const FragmentOutcome& f, bool final_pose) {
  if (final_pose) return f.registration.iterations_run > 0 ? to_json(f.registration.transform) : json(nullptr);
  return f.back_id.empty() ? json(nullptr) : to_json(f.initial);
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

}  // namespace

ScanContour extract_scan_contour(const PointCloud& cloud, std::size_t n_c, double alpha) {
  ScanContour out;
  out.plane = fit_plane_pca(cloud);
  const auto projected = project_to_plane(cloud, out.plane);
  out.alpha = alpha > 0.0 ? alpha : default_alpha(projected);
  const AlphaShape shape = alpha_shape(projected, out.alpha);
  out.contour = resample_uniform(shape.polygon, n_c);
  out.descriptor = descriptor(out.contour);

  const NeighborIndex index(cloud);
  out.contour_3d.reserve(out.contour.size());
  for (const auto& v : out.contour.vertices) out.contour_3d.push_back(cloud[index.nearest(out.plane.lift(v)).index]);
  return out;
}

PairAlignment align_pair(const ScanContour& front, const ScanContour& back) {
  PairAlignment out;
  out.match = descriptor_distance(front.descriptor, back.descriptor);
  out.initial = initial_alignment(front.contour_3d, back.contour_3d, out.match.best_shift, out.match.mirrored);
  return out;
}

BoundarySet scan_boundary(const PointCloud& cloud, const std::vector<CameraView>& views, const BoundaryConfig& config) {
  if (views.empty()) return extract_boundary(cloud, config);
  const auto candidates = mask_candidate_filter(cloud, views, config.pixel_threshold);
  if (candidates.empty()) return {};
  return extract_boundary(cloud, candidates, config.k, config.gap_threshold);
}

bool BatchReport::any_failed() const {
  return std::any_of(fragments.begin(), fragments.end(), [](const FragmentOutcome& f) { return !f.ok; });
}

BatchReport run_pipeline(const std::vector<ScanInput>& front, const std::vector<ScanInput>& back,
                         const PipelineConfig& config, const std::vector<PointCloud>& ground_truth,
                         const std::optional<fs::path>& out_dir) {
  config.validate();
  if (front.empty() || back.empty()) throw Error(ErrorCode::SizeMismatch, "empty scan batch");
  if (front.size() != back.size()) {
    throw Error(ErrorCode::SizeMismatch, "front batch has " + std::to_string(front.size()) + " scans, back batch " +
                                             std::to_string(back.size()));
  }
  require(ground_truth.empty() || ground_truth.size() == front.size(), "one ground-truth model per front scan");

  // Stage 1: per-scan contours.
  std::vector<ContourSlot> fc(front.size()), bc(back.size());
  parallel_for(front.size() + back.size(), config.jobs, [&](std::size_t k) {
    const bool is_front = k < front.size();
    const ScanInput& scan = is_front ? front[k] : back[k - front.size()];
    ContourSlot& slot = is_front ? fc[k] : bc[k - front.size()];
    try {
      slot.contour = extract_scan_contour(scan.cloud, config.n_c, config.alpha);
    } catch (const std::exception& e) {
      slot.error = describe(e);
    }
  });

  // Stage 2: batch matching (serial barrier).
  std::vector<std::size_t> front_map, back_map;
  const BatchAssignment assignment = match_available(fc, bc, front_map, back_map);

  BatchReport report;
  report.fragments.resize(front.size());
  std::vector<std::optional<std::size_t>> partner(front.size());
  for (std::size_t i = 0; i < front.size(); ++i) {
    report.fragments[i].front_id = front[i].id;
    if (!fc[i].contour) {
      report.fragments[i].failed_stage = "contour";
      report.fragments[i].error = fc[i].error;
    }
  }
  for (std::size_t j = 0; j < back.size(); ++j) {
    if (!bc[j].contour) report.warnings.push_back("back scan " + back[j].id + ": contour failed: " + bc[j].error);
  }
  for (const auto& p : assignment.pairs) {
    const std::size_t i = front_map[p.front];
    const std::size_t j = back_map[p.back];
    auto& f = report.fragments[i];
    f.back_id = back[j].id;
    f.match = p.match;
    f.ambiguous = p.ambiguous;
    partner[i] = j;
    if (p.ambiguous) {
      report.warnings.push_back("ambiguous match: front " + front[i].id + " <-> back " + back[j].id);
    }
  }
  for (std::size_t i = 0; i < front.size(); ++i) {
    auto& f = report.fragments[i];
    if (fc[i].contour && !partner[i]) {
      f.failed_stage = "match";
      f.error = "no back scan left to pair with";
    }
  }

  if (out_dir) fs::create_directories(*out_dir / "merged");

  // Stage 3: per-pair alignment, boundaries, registration, merge, evaluation.
  parallel_for(front.size(), config.jobs, [&](std::size_t i) {
    auto& f = report.fragments[i];
    if (!partner[i]) return;
    const std::size_t j = *partner[i];
    std::string stage = "initial_alignment";
    try {
      f.initial = initial_alignment(fc[i].contour->contour_3d, bc[j].contour->contour_3d, f.match.best_shift,
                                    f.match.mirrored);
      stage = "boundary";
      const BoundarySet fb = scan_boundary(front[i].cloud, front[i].views, config.boundary);
      const BoundarySet bb = scan_boundary(back[j].cloud, back[j].views, config.boundary);
      f.front_boundary_size = fb.size();
      f.back_boundary_size = bb.size();
      stage = "registration";
      f.registration = bbicp(front[i].cloud, back[j].cloud, fb, bb, f.initial, config.bbicp);
      stage = "merge";
      std::vector<Vec3> merged = front[i].cloud.points();
      merged.reserve(front[i].cloud.size() + back[j].cloud.size());
      for (const auto& p : back[j].cloud.points()) merged.push_back(f.registration.transform(p));
      const PointCloud merged_cloud(std::move(merged));
      f.merged_size = merged_cloud.size();
      if (out_dir) {
        f.merged_path = "merged/" + front[i].id + ".ply";
        write_ply(*out_dir / f.merged_path, merged_cloud);
      }
      if (!ground_truth.empty()) {
        stage = "evaluate";
        f.eval = evaluate(merged_cloud, ground_truth[i], config.completeness_threshold, config.accuracy_percentile);
      }
      f.ok = true;
    } catch (const std::exception& e) {
      f.failed_stage = stage;
      f.error = describe(e);
    }
  });

  // Manifest.
  json m;
  m["format"] = "sherdreg-manifest-1";
  json cfg;
  {
    std::istringstream in(config.to_text());
    std::string line;
    while (std::getline(in, line)) {
      const auto eq = line.find(" = ");
      // The worker count does not affect results, so it stays out of the record.
      if (eq != std::string::npos && line.substr(0, eq) != "jobs") cfg[line.substr(0, eq)] = line.substr(eq + 3);
    }
  }
  m["config"] = cfg;
  m["front_count"] = front.size();
  m["back_count"] = back.size();
  json rows = json::array();
  for (Eigen::Index r = 0; r < assignment.distances.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < assignment.distances.cols(); ++c) row.push_back(assignment.distances(r, c));
    rows.push_back(std::move(row));
  }
  json matched_front = json::array(), matched_back = json::array();
  for (auto i : front_map) matched_front.push_back(front[i].id);
  for (auto j : back_map) matched_back.push_back(back[j].id);
  m["descriptor_distances"] = {{"front", matched_front}, {"back", matched_back}, {"matrix", rows}};

  json frags = json::array();
  std::vector<FragmentEval> evals;
  std::size_t failed = 0;
  for (const auto& f : report.fragments) {
    json e;
    e["front"] = f.front_id;
    e["back"] = f.back_id.empty() ? json(nullptr) : json(f.back_id);
    e["status"] = f.ok ? "ok" : "failed";
    if (!f.ok) {
      ++failed;
      e["failed_stage"] = f.failed_stage;
      e["error"] = f.error;
    }
    if (!f.back_id.empty()) {
      e["match"] = {{"distance", f.match.distance},
                    {"shift", f.match.best_shift},
                    {"mirrored", f.match.mirrored},
                    {"ambiguous", f.ambiguous}};
      e["initial_transform"] = transform_or_null(f, false);
    }
    if (f.ok) {
      e["registration"] = to_json(f.registration);
      e["boundary_points"] = {{"front", f.front_boundary_size}, {"back", f.back_boundary_size}};
      e["merged_points"] = f.merged_size;
      if (!f.merged_path.empty()) e["merged"] = f.merged_path;
      if (f.eval) {
        e["metrics"] = to_json(*f.eval);
        evals.push_back({f.front_id, *f.eval});
      }
    }
    frags.push_back(std::move(e));
  }
  m["fragments"] = std::move(frags);
  if (!evals.empty()) m["batch_metrics"] = to_json(batch_mean(evals));
  m["warnings"] = report.warnings;
  m["failed_count"] = failed;
  report.manifest_json = m.dump(2) + "\n";

  // Summary.
  std::ostringstream s;
  s << "fragments: " << front.size() << ", registered: " << front.size() - failed << ", failed: " << failed << "\n";
  for (const auto& f : report.fragments) {
    s << f.front_id << " <-> " << (f.back_id.empty() ? "-" : f.back_id);
    if (f.ok) {
      s << "  d=" << fixed(f.match.distance, 3) << (f.match.mirrored ? " mirrored" : "")
        << (f.ambiguous ? " AMBIGUOUS" : "") << "  iters=" << f.registration.iterations_run
        << "  rms=" << fixed(f.registration.final_rms, 3) << " mm";
      if (f.eval) {
        s << "  acc=" << fixed(f.eval->accuracy_mm, 2) << " comp=" << fixed(f.eval->completeness_pct, 2)
          << "% mae=" << fixed(f.eval->mae_mm, 2) << " sd=" << fixed(f.eval->sd_mm, 2);
      }
    } else {
      s << "  FAILED at " << f.failed_stage << ": " << f.error;
    }
    s << "\n";
  }
  for (const auto& w : report.warnings) s << "warning: " << w << "\n";
  if (!evals.empty()) s << "\n" << format_eval_csv(evals);
  report.summary = s.str();

  if (out_dir) {
    write_text_file(*out_dir / "manifest.json", report.manifest_json);
    write_text_file(*out_dir / "summary.txt", report.summary);
  }
  return report;
}

std::vector<fs::path> list_scans(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::IoError, "not a directory: " + dir.string());
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".ply") out.push_back(e.path());
  }
  std::sort(out.begin(), out.end());
  return out;
}

BatchReport run_pipeline(const fs::path& front_dir, const fs::path& back_dir, const PipelineConfig& config,
                         const fs::path& out_dir, const std::optional<fs::path>& gt_dir) {
  const auto fp = list_scans(front_dir);
  const auto bp = list_scans(back_dir);
  if (fp.empty() || bp.empty()) throw Error(ErrorCode::SizeMismatch, "no .ply scans found in the input directories");
  if (fp.size() != bp.size()) {
    throw Error(ErrorCode::SizeMismatch, "front directory has " + std::to_string(fp.size()) + " scans, back " +
                                             std::to_string(bp.size()));
  }
  auto load = [](const fs::path& p) {
    ScanInput s;
    s.id = p.stem().string();
    s.cloud = read_ply(p);
    const fs::path cams = p.parent_path() / (s.id + ".cameras.json");
    if (fs::exists(cams)) s.views = read_camera_views(cams);
    return s;
  };
  std::vector<ScanInput> front, back;
  for (const auto& p : fp) front.push_back(load(p));
  for (const auto& p : bp) back.push_back(load(p));
  std::vector<PointCloud> gt;
  if (gt_dir) {
    for (const auto& f : front) gt.push_back(read_ply(*gt_dir / (f.id + ".ply")));
  }
  return run_pipeline(front, back, config, gt, out_dir);
}

}  // namespace sherdreg
