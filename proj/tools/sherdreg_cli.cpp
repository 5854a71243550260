// sherdreg command-line front end.
#include "sherdreg/camera_io.hpp"
#include "sherdreg/config.hpp"
#include "sherdreg/errors.hpp"
#include "sherdreg/metrics.hpp"
#include "sherdreg/pipeline.hpp"
#include "sherdreg/ply_io.hpp"
#include "sherdreg/serialization.hpp"
#include "sherdreg/synth.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace sherdreg;

namespace {

struct Globals {
  std::uint64_t seed = 0;
  unsigned jobs = 1;
  std::string out_dir;
  std::string config_path;
};

// Tunables shared by every subcommand; each overrides the config file only
// when given on the command line.
struct Overrides {
  CLI::Option* n_c = nullptr;
  CLI::Option* alpha = nullptr;
  CLI::Option* k = nullptr;
  CLI::Option* gap = nullptr;
  CLI::Option* pixel = nullptr;
  CLI::Option* max_iter = nullptr;
  CLI::Option* tol = nullptr;
  CLI::Option* reject = nullptr;
  CLI::Option* min_corr = nullptr;
  CLI::Option* completeness = nullptr;
  CLI::Option* percentile = nullptr;
  CLI::Option* seed = nullptr;
  CLI::Option* jobs = nullptr;

  std::size_t v_n_c = 0, v_k = 0, v_min_corr = 0;
  double v_alpha = 0, v_gap = 0, v_pixel = 0, v_tol = 0, v_reject = 0, v_completeness = 0, v_percentile = 0;
  int v_max_iter = 0;
};

void add_overrides(CLI::App& app, Overrides& o, Globals& g) {
  o.seed = app.add_option("--seed", g.seed, "Random seed");
  o.jobs = app.add_option("--jobs", g.jobs, "Parallel fragment workers")->check(CLI::PositiveNumber);
  app.add_option("--out-dir", g.out_dir, "Output directory");
  app.add_option("--config", g.config_path, "Key = value configuration file")->check(CLI::ExistingFile);
  o.n_c = app.add_option("--n-c", o.v_n_c, "Contour samples");
  o.alpha = app.add_option("--alpha", o.v_alpha, "Alpha-shape radius in mm (0 = automatic)");
  o.k = app.add_option("--boundary-k", o.v_k, "Neighbours for the angular-gap test");
  o.gap = app.add_option("--gap-threshold", o.v_gap, "Angular-gap threshold in radians");
  o.pixel = app.add_option("--pixel-threshold", o.v_pixel, "Mask-contour distance threshold in pixels");
  o.max_iter = app.add_option("--max-iterations", o.v_max_iter, "Registration iteration cap");
  o.tol = app.add_option("--convergence-tol", o.v_tol, "Relative objective change for convergence");
  o.reject = app.add_option("--reject-distance", o.v_reject, "Correspondence rejection distance in mm (0 = automatic)");
  o.min_corr = app.add_option("--min-correspondences", o.v_min_corr, "Minimum surviving pairs");
  o.completeness = app.add_option("--completeness-threshold", o.v_completeness, "Completeness threshold in mm");
  o.percentile = app.add_option("--accuracy-percentile", o.v_percentile, "Accuracy percentile");
}

PipelineConfig resolve_config(const Overrides& o, const Globals& g) {
  PipelineConfig c;
  if (!g.config_path.empty()) c = PipelineConfig::load(g.config_path);
  auto given = [](const CLI::Option* opt) { return opt && opt->count() > 0; };
  if (given(o.n_c)) c.n_c = o.v_n_c;
  if (given(o.alpha)) c.alpha = o.v_alpha;
  if (given(o.k)) c.boundary.k = o.v_k;
  if (given(o.gap)) c.boundary.gap_threshold = o.v_gap;
  if (given(o.pixel)) c.boundary.pixel_threshold = o.v_pixel;
  if (given(o.max_iter)) c.bbicp.max_iterations = o.v_max_iter;
  if (given(o.tol)) c.bbicp.convergence_tol = o.v_tol;
  if (given(o.reject)) {
    c.bbicp.correspondence_reject_distance = o.v_reject > 0.0 ? std::optional<double>(o.v_reject) : std::nullopt;
  }
  if (given(o.min_corr)) c.bbicp.min_correspondences = o.v_min_corr;
  if (given(o.completeness)) c.completeness_threshold = o.v_completeness;
  if (given(o.percentile)) c.accuracy_percentile = o.v_percentile;
  if (given(o.seed)) c.seed = g.seed;
  if (given(o.jobs)) c.jobs = g.jobs;
  c.validate();
  return c;
}

fs::path out_dir_or(const Globals& g, const fs::path& fallback) {
  const fs::path p = g.out_dir.empty() ? fallback : fs::path(g.out_dir);
  fs::create_directories(p);
  return p;
}

// Writes to out-dir/name when an output directory is set, stdout otherwise.
void emit(const Globals& g, const std::string& name, const std::string& text) {
  if (g.out_dir.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
    return;
  }
  fs::create_directories(g.out_dir);
  write_text_file(fs::path(g.out_dir) / name, text);
}

std::string scan_id(std::size_t i) {
  std::ostringstream s;
  s << "scan_" << std::setw(2) << std::setfill('0') << i;
  return s.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Front/back fragment pairing and boundary registration"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  Overrides o;
  add_overrides(app, o, g);

  // gen-synth
  auto* gen = app.add_subcommand("gen-synth", "Generate a synthetic batch with ground truth");
  std::size_t gen_n = 8;
  SpecRanges ranges;
  double gt_spacing = 0.0;
  gen->add_option("-n,--count", gen_n, "Fragments in the batch (1-20)");
  gen->add_option("--spacing", ranges.sample_spacing, "Sample spacing in mm");
  gen->add_option("--noise", ranges.noise_sigma, "Gaussian noise sigma in mm");
  gen->add_option("--max-overlap", ranges.max_overlap, "Largest strip share of a scan");
  gen->add_option("--flat-probability", ranges.flat_probability, "Share of flat fragments");
  gen->add_option("--distinctness-floor", ranges.distinctness_floor, "Minimum outline descriptor distance");
  gen->add_flag("--adversarial", ranges.adversarial, "Make fragment 1 a near-copy of fragment 0");
  gen->add_option("--gt-spacing", gt_spacing, "Ground-truth model spacing in mm (default: the scan spacing)");

  // extract-contour
  auto* ec = app.add_subcommand("extract-contour", "Contour and shape descriptor of one scan");
  std::string ec_input;
  ec->add_option("input", ec_input, "Scan PLY")->required()->check(CLI::ExistingFile);

  // match
  auto* mt = app.add_subcommand("match", "Pair the scans of two directories");
  std::string mt_front, mt_back;
  mt->add_option("--front-dir", mt_front)->required()->check(CLI::ExistingDirectory);
  mt->add_option("--back-dir", mt_back)->required()->check(CLI::ExistingDirectory);

  // extract-boundary
  auto* eb = app.add_subcommand("extract-boundary", "3D boundary points of one scan");
  std::string eb_input, eb_cameras;
  eb->add_option("input", eb_input, "Scan PLY")->required()->check(CLI::ExistingFile);
  eb->add_option("--cameras", eb_cameras, "Camera metadata JSON with masks")->check(CLI::ExistingFile);

  // register
  auto* rg = app.add_subcommand("register", "Register a back scan onto a front scan");
  std::string rg_front, rg_back, rg_fb, rg_bb, rg_init, rg_method = "bbicp";
  double rg_trim = 0.5;
  rg->add_option("--front", rg_front)->required()->check(CLI::ExistingFile);
  rg->add_option("--back", rg_back)->required()->check(CLI::ExistingFile);
  rg->add_option("--front-boundary", rg_fb, "Boundary JSON of the front scan")->check(CLI::ExistingFile);
  rg->add_option("--back-boundary", rg_bb, "Boundary JSON of the back scan")->check(CLI::ExistingFile);
  rg->add_option("--init", rg_init, "Initial transform JSON (default: contour alignment)")->check(CLI::ExistingFile);
  rg->add_option("--method", rg_method)->check(CLI::IsMember({"bbicp", "trimmed-icp"}));
  rg->add_option("--trim", rg_trim, "Trim fraction for trimmed-icp");

  // evaluate
  auto* ev = app.add_subcommand("evaluate", "Accuracy / completeness / MAE / SD against ground truth");
  std::vector<std::string> ev_recon, ev_gt;
  std::string ev_recon_dir, ev_gt_dir;
  ev->add_option("--recon", ev_recon, "Reconstruction PLY(s)")->check(CLI::ExistingFile);
  ev->add_option("--gt", ev_gt, "Ground-truth PLY(s), one per reconstruction")->check(CLI::ExistingFile);
  ev->add_option("--recon-dir", ev_recon_dir)->check(CLI::ExistingDirectory);
  ev->add_option("--gt-dir", ev_gt_dir)->check(CLI::ExistingDirectory);

  // pipeline
  auto* pl = app.add_subcommand("pipeline", "Match, align, register, merge and evaluate a batch");
  std::string pl_front, pl_back, pl_gt;
  pl->add_option("--front-dir", pl_front)->required()->check(CLI::ExistingDirectory);
  pl->add_option("--back-dir", pl_back)->required()->check(CLI::ExistingDirectory);
  pl->add_option("--gt-dir", pl_gt)->check(CLI::ExistingDirectory);
  bool write_config = false;
  pl->add_flag("--write-config", write_config, "Also save the resolved configuration");

  CLI11_PARSE(app, argc, argv);

  try {
    const PipelineConfig cfg = resolve_config(o, g);

    if (*gen) {
      ranges.n_c = cfg.n_c;
      const fs::path out = out_dir_or(g, "synth");
      const SyntheticBatch batch = generate_batch(gen_n, cfg.seed, ranges);
      fs::create_directories(out / "front");
      fs::create_directories(out / "back");
      fs::create_directories(out / "gt");
      std::vector<std::string> front_ids, back_ids;
      for (std::size_t i = 0; i < gen_n; ++i) {
        front_ids.push_back(scan_id(i));
        back_ids.push_back(scan_id(i));
      }
      const auto backs = batch.back_batch();
      for (std::size_t i = 0; i < gen_n; ++i) {
        write_ply(out / "front" / (front_ids[i] + ".ply"), batch.fragments[i].front);
        write_ply(out / "back" / (back_ids[i] + ".ply"), backs[i]);
        const double s = gt_spacing > 0.0 ? gt_spacing : ranges.sample_spacing;
        write_ply(out / "gt" / (front_ids[i] + ".ply"),
                  sample_complete_model(batch.specs[i], batch.fragments[i].truth.front_pose, s,
                                        mix_seed(cfg.seed, 0x67, i)));
      }
      write_text_file(out / "truth.json", truth_json(batch, front_ids, back_ids) + "\n");
      nlohmann::json m;
      m["count"] = gen_n;
      m["seed"] = cfg.seed;
      m["front_dir"] = "front";
      m["back_dir"] = "back";
      m["gt_dir"] = "gt";
      m["truth"] = "truth.json";
      m["sample_spacing"] = ranges.sample_spacing;
      m["noise_sigma"] = ranges.noise_sigma;
      m["adversarial"] = ranges.adversarial;
      write_text_file(out / "manifest.json", m.dump(2) + "\n");
      std::cout << "wrote " << gen_n << " fragment pairs to " << out.string() << "\n";
      return 0;
    }

    if (*ec) {
      const ScanContour c = extract_scan_contour(read_ply(ec_input), cfg.n_c, cfg.alpha);
      emit(g, fs::path(ec_input).stem().string() + ".contour.json", contour_json(c.contour, c.descriptor));
      return 0;
    }

    if (*mt) {
      std::vector<ShapeDescriptor> fd, bd;
      std::vector<std::string> fi, bi;
      for (const auto& p : list_scans(mt_front)) {
        fd.push_back(extract_scan_contour(read_ply(p), cfg.n_c, cfg.alpha).descriptor);
        fi.push_back(p.stem().string());
      }
      for (const auto& p : list_scans(mt_back)) {
        bd.push_back(extract_scan_contour(read_ply(p), cfg.n_c, cfg.alpha).descriptor);
        bi.push_back(p.stem().string());
      }
      emit(g, "assignment.json", assignment_json(match_batches(fd, bd), fi, bi));
      return 0;
    }

    if (*eb) {
      const PointCloud cloud = read_ply(eb_input);
      std::vector<CameraView> views;
      if (!eb_cameras.empty()) views = read_camera_views(eb_cameras);
      const BoundarySet b = scan_boundary(cloud, views, cfg.boundary);
      const std::string stem = fs::path(eb_input).stem().string();
      emit(g, stem + ".boundary.json", boundary_json(b));
      if (!g.out_dir.empty()) {
        std::vector<Vec3> pts;
        for (auto i : b.indices) pts.push_back(cloud[i]);
        write_ply(fs::path(g.out_dir) / (stem + ".boundary.ply"), PointCloud(std::move(pts)));
      }
      return 0;
    }

    if (*rg) {
      const PointCloud front = read_ply(rg_front);
      const PointCloud back = read_ply(rg_back);
      RigidTransform init;
      if (!rg_init.empty()) {
        init = parse_transform_json(read_text_file(rg_init));
      } else {
        init = align_pair(extract_scan_contour(front, cfg.n_c, cfg.alpha), extract_scan_contour(back, cfg.n_c, cfg.alpha))
                   .initial;
      }
      RegistrationResult r;
      if (rg_method == "bbicp") {
        const BoundarySet fb = rg_fb.empty() ? scan_boundary(front, {}, cfg.boundary)
                                             : parse_boundary_json(read_text_file(rg_fb));
        const BoundarySet bb = rg_bb.empty() ? scan_boundary(back, {}, cfg.boundary)
                                             : parse_boundary_json(read_text_file(rg_bb));
        r = bbicp(front, back, fb, bb, init, cfg.bbicp);
      } else {
        r = trimmed_icp(back, front, init, rg_trim, cfg.bbicp);
      }
      emit(g, "registration.json", registration_json(r));
      if (!g.out_dir.empty()) {
        write_text_file(fs::path(g.out_dir) / "trace.csv", trace_csv(r));
        std::vector<Vec3> merged = front.points();
        for (const auto& p : back.points()) merged.push_back(r.transform(p));
        write_ply(fs::path(g.out_dir) / "merged.ply", PointCloud(std::move(merged)));
      }
      return 0;
    }

    if (*ev) {
      std::vector<std::pair<std::string, std::pair<fs::path, fs::path>>> jobs;
      if (!ev_recon_dir.empty() || !ev_gt_dir.empty()) {
        if (ev_recon_dir.empty() || ev_gt_dir.empty()) throw Error(ErrorCode::PreconditionViolation, "--recon-dir needs --gt-dir");
        for (const auto& p : list_scans(ev_recon_dir)) {
          jobs.push_back({p.stem().string(), {p, fs::path(ev_gt_dir) / p.filename()}});
        }
      } else {
        if (ev_recon.empty() || ev_recon.size() != ev_gt.size()) {
          throw Error(ErrorCode::SizeMismatch, "give one --gt per --recon");
        }
        for (std::size_t i = 0; i < ev_recon.size(); ++i) {
          jobs.push_back({fs::path(ev_recon[i]).stem().string(), {ev_recon[i], ev_gt[i]}});
        }
      }
      std::vector<FragmentEval> rows;
      for (const auto& [id, paths] : jobs) {
        rows.push_back({id, evaluate(read_ply(paths.first), read_ply(paths.second), cfg.completeness_threshold,
                                     cfg.accuracy_percentile)});
      }
      emit(g, "evaluation.csv", format_eval_csv(rows));
      return 0;
    }

    if (*pl) {
      const fs::path out = g.out_dir.empty() ? fs::path("pipeline_out") : fs::path(g.out_dir);
      const std::optional<fs::path> gt = pl_gt.empty() ? std::nullopt : std::optional<fs::path>(pl_gt);
      // Input validation happens before anything is written.
      const BatchReport report = run_pipeline(pl_front, pl_back, cfg, out, gt);
      if (write_config) cfg.save(out / "config.ini");
      std::cout << report.summary;
      return report.any_failed() ? 1 : 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
