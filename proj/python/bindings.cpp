// Python bindings: point clouds cross the boundary as (N, 3) float64 arrays,
// transforms as 4x4 homogeneous matrices.
#include "sherdreg/boundary.hpp"
#include "sherdreg/errors.hpp"
#include "sherdreg/matching.hpp"
#include "sherdreg/metrics.hpp"
#include "sherdreg/pipeline.hpp"
#include "sherdreg/ply_io.hpp"
#include "sherdreg/registration.hpp"
#include "sherdreg/synth.hpp"

#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace sherdreg;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

PointCloud to_cloud(const Array& a) {
  if (a.ndim() != 2 || a.shape(1) != 3) throw py::value_error("expected an (N, 3) array");
  const auto r = a.unchecked<2>();
  std::vector<Vec3> pts(static_cast<std::size_t>(r.shape(0)));
  for (py::ssize_t i = 0; i < r.shape(0); ++i) pts[i] = Vec3(r(i, 0), r(i, 1), r(i, 2));
  return PointCloud(std::move(pts));
}

template <class V>
Array to_array(const std::vector<V>& pts) {
  constexpr py::ssize_t dim = V::RowsAtCompileTime;
  Array a({static_cast<py::ssize_t>(pts.size()), dim});
  auto w = a.mutable_unchecked<2>();
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (py::ssize_t j = 0; j < dim; ++j) w(i, j) = pts[i][j];
  return a;
}

RigidTransform to_transform(const Eigen::Matrix4d& m) {
  RigidTransform t;
  t.rotation = m.topLeftCorner<3, 3>();
  t.translation = m.topRightCorner<3, 1>();
  if (!t.is_proper(1e-6)) throw py::value_error("not a proper rigid transform");
  return t;
}

BoundarySet to_boundary(const std::vector<std::size_t>& idx) { return BoundarySet::from_unsorted(idx); }

py::dict registration_dict(const RegistrationResult& r) {
  py::dict d;
  d["transform"] = r.transform.matrix();
  d["objective_trace"] = r.objective_trace;
  d["correspondence_counts"] = r.correspondence_counts;
  d["nn_queries"] = r.nn_queries;
  d["iterations"] = r.iterations_run;
  d["converged"] = r.converged;
  d["final_rms"] = r.final_rms;
  d["reject_distance"] = r.reject_distance;
  return d;
}

BBICPConfig icp_config(int max_iterations, double tol, std::optional<double> reject) {
  BBICPConfig c;
  c.max_iterations = max_iterations;
  c.convergence_tol = tol;
  c.correspondence_reject_distance = reject;
  return c;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Front/back sherd scan matching and boundary-based registration";

  // Messages start with the error kind, e.g. "InvalidSpec: ...".
  py::register_exception<Error>(m, "SherdregError", PyExc_RuntimeError);

  m.def("read_ply", [](const std::filesystem::path& p) { return to_array(read_ply(p).points()); });
  m.def("write_ply", [](const std::filesystem::path& p, const Array& pts) { write_ply(p, to_cloud(pts)); });

  m.def(
      "generate_batch",
      [](std::size_t n, std::uint64_t seed, double noise, double max_overlap, double spacing, bool adversarial) {
        SpecRanges r;
        r.noise_sigma = noise;
        r.max_overlap = max_overlap;
        r.sample_spacing = spacing;
        r.adversarial = adversarial;
        const SyntheticBatch b = generate_batch(n, seed, r);
        py::list fronts, backs, gt;
        for (const auto& f : b.fragments) {
          fronts.append(to_array(f.front.points()));
          gt.append(f.truth.back_to_front().matrix());
        }
        for (const auto& c : b.back_batch()) backs.append(to_array(c.points()));
        py::dict d;
        d["front"] = fronts;
        d["back"] = backs;
        d["pairing"] = b.pairing;
        d["back_to_front"] = gt;
        return d;
      },
      py::arg("n"), py::arg("seed"), py::arg("noise") = 0.05, py::arg("max_overlap") = 0.2,
      py::arg("spacing") = 0.5, py::arg("adversarial") = false,
      "Synthetic batch. back[pairing[i]] is the back scan of front[i]; back_to_front[i] maps it onto front[i].");

  m.def(
      "extract_contour",
      [](const Array& pts, std::size_t n_c, double alpha) {
        const ScanContour c = extract_scan_contour(to_cloud(pts), n_c, alpha);
        py::dict d;
        d["contour"] = to_array(c.contour.vertices);
        d["contour_3d"] = to_array(c.contour_3d);
        d["theta_bar"] = c.descriptor.theta_bar;
        d["turning"] = c.descriptor.turning;
        d["alpha"] = c.alpha;
        return d;
      },
      py::arg("points"), py::arg("n_c") = kDefaultContourSamples, py::arg("alpha") = 0.0);

  m.def(
      "match",
      [](const std::vector<Array>& front, const std::vector<Array>& back, std::size_t n_c) {
        std::vector<ShapeDescriptor> fd, bd;
        for (const auto& a : front) fd.push_back(extract_scan_contour(to_cloud(a), n_c).descriptor);
        for (const auto& a : back) bd.push_back(extract_scan_contour(to_cloud(a), n_c).descriptor);
        const BatchAssignment a = match_batches(fd, bd);
        std::vector<std::size_t> col;
        std::vector<bool> ambiguous;
        for (const auto& p : a.pairs) {
          col.push_back(p.back);
          ambiguous.push_back(p.ambiguous);
        }
        py::dict d;
        d["assignment"] = col;
        d["ambiguous"] = ambiguous;
        d["distances"] = Eigen::MatrixXd(a.distances);
        return d;
      },
      py::arg("front"), py::arg("back"), py::arg("n_c") = kDefaultContourSamples,
      "Pair front scans with back scans; assignment[i] is the back index for front i.");

  m.def(
      "extract_boundary",
      [](const Array& pts, std::size_t k, double gap) {
        BoundaryConfig c;
        c.k = k;
        c.gap_threshold = gap;
        return extract_boundary(to_cloud(pts), c).indices;
      },
      py::arg("points"), py::arg("k") = BoundaryConfig{}.k, py::arg("gap_threshold") = BoundaryConfig{}.gap_threshold);

  m.def(
      "initial_alignment",
      [](const Array& front, const Array& back, std::size_t n_c) {
        return align_pair(extract_scan_contour(to_cloud(front), n_c), extract_scan_contour(to_cloud(back), n_c))
            .initial.matrix();
      },
      py::arg("front"), py::arg("back"), py::arg("n_c") = kDefaultContourSamples);

  m.def(
      "bbicp",
      [](const Array& front, const Array& back, const std::vector<std::size_t>& fb, const std::vector<std::size_t>& bb,
         const Eigen::Matrix4d& init, int max_iterations, double tol, std::optional<double> reject) {
        return registration_dict(bbicp(to_cloud(front), to_cloud(back), to_boundary(fb), to_boundary(bb),
                                       to_transform(init), icp_config(max_iterations, tol, reject)));
      },
      py::arg("front"), py::arg("back"), py::arg("front_boundary"), py::arg("back_boundary"),
      py::arg("init") = Eigen::Matrix4d::Identity().eval(), py::arg("max_iterations") = 100,
      py::arg("convergence_tol") = 1e-6, py::arg("reject_distance") = py::none());

  m.def(
      "trimmed_icp",
      [](const Array& source, const Array& target, const Eigen::Matrix4d& init, double trim, int max_iterations,
         double tol) {
        return registration_dict(trimmed_icp(to_cloud(source), to_cloud(target), to_transform(init), trim,
                                             icp_config(max_iterations, tol, std::nullopt)));
      },
      py::arg("source"), py::arg("target"), py::arg("init") = Eigen::Matrix4d::Identity().eval(),
      py::arg("trim_fraction") = 0.5, py::arg("max_iterations") = 100, py::arg("convergence_tol") = 1e-6);

  m.def(
      "rigid_fit",
      [](const Array& source, const Array& target) {
        const PointCloud s = to_cloud(source), t = to_cloud(target);
        return rigid_fit_svd(s.points(), t.points()).matrix();
      },
      py::arg("source"), py::arg("target"));

  m.def(
      "evaluate",
      [](const Array& recon, const Array& gt, double threshold, double percentile) {
        const EvalReport r = evaluate(to_cloud(recon), to_cloud(gt), threshold, percentile);
        py::dict d;
        d["accuracy_mm"] = r.accuracy_mm;
        d["completeness_pct"] = r.completeness_pct;
        d["mae_mm"] = r.mae_mm;
        d["sd_mm"] = r.sd_mm;
        return d;
      },
      py::arg("recon"), py::arg("gt"), py::arg("threshold") = kDefaultCompletenessThreshold,
      py::arg("percentile") = kDefaultAccuracyPercentile);

  m.def(
      "run_pipeline",
      [](const std::filesystem::path& front_dir, const std::filesystem::path& back_dir,
         const std::filesystem::path& out_dir, std::optional<std::filesystem::path> gt_dir, unsigned jobs) {
        PipelineConfig c;
        c.jobs = jobs;
        py::gil_scoped_release release;
        return run_pipeline(front_dir, back_dir, c, out_dir, gt_dir).manifest_json;
      },
      py::arg("front_dir"), py::arg("back_dir"), py::arg("out_dir"), py::arg("gt_dir") = py::none(),
      py::arg("jobs") = 1, "Run the batch pipeline on two directories of PLY scans; returns the manifest JSON.");
}
