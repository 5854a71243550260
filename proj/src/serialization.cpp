#include "sherdreg/serialization.hpp"

#include "sherdreg/errors.hpp"
#include "json_util.hpp"

#include <fstream>
#include <sstream>

namespace sherdreg {

using nlohmann::json;

std::string contour_json(const Contour& contour, const ShapeDescriptor& d) {
  json j;
  json verts = json::array();
  for (const auto& v : contour.vertices) verts.push_back({v.x(), v.y()});
  j["n_c"] = contour.size();
  j["perimeter"] = contour.perimeter;
  j["vertices"] = std::move(verts);
  j["turning"] = d.turning;
  j["theta_bar"] = d.theta_bar;
  j["edge_length"] = d.edge_length;
  return j.dump(2);
}

std::string transform_json(const RigidTransform& t) { return to_json(t).dump(2); }

RigidTransform parse_transform_json(const std::string& text) {
  try {
    return transform_from_json(json::parse(text));
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("transform document: ") + e.what());
  }
}

std::string boundary_json(const BoundarySet& b) {
  json j;
  j["count"] = b.size();
  j["indices"] = b.indices;
  return j.dump();
}

BoundarySet parse_boundary_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    return BoundarySet::from_unsorted(j.at("indices").get<std::vector<std::size_t>>());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, std::string("boundary document: ") + e.what());
  }
}

std::string assignment_json(const BatchAssignment& a, const std::vector<std::string>& front_ids,
                            const std::vector<std::string>& back_ids) {
  json j;
  j["pairs"] = json::array();
  for (const auto& p : a.pairs) {
    j["pairs"].push_back({{"front", front_ids.at(p.front)},
                          {"back", back_ids.at(p.back)},
                          {"distance", p.match.distance},
                          {"shift", p.match.best_shift},
                          {"mirrored", p.match.mirrored},
                          {"ambiguous", p.ambiguous}});
  }
  json rows = json::array();
  for (Eigen::Index r = 0; r < a.distances.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < a.distances.cols(); ++c) row.push_back(a.distances(r, c));
    rows.push_back(std::move(row));
  }
  j["front_ids"] = front_ids;
  j["back_ids"] = back_ids;
  j["distances"] = std::move(rows);
  return j.dump(2);
}

std::string registration_json(const RegistrationResult& r) { return to_json(r).dump(2); }

std::string trace_csv(const RegistrationResult& r) {
  std::ostringstream out;
  out.precision(17);
  out << "iteration,objective,correspondences,nn_queries\n";
  for (std::size_t i = 0; i < r.objective_trace.size(); ++i) {
    out << i + 1 << ',' << r.objective_trace[i] << ','
        << (i < r.correspondence_counts.size() ? r.correspondence_counts[i] : 0) << ','
        << (i < r.nn_queries.size() ? r.nn_queries[i] : 0) << '\n';
  }
  return out.str();
}

std::string truth_json(const SyntheticBatch& batch, const std::vector<std::string>& front_ids,
                       const std::vector<std::string>& back_ids) {
  json j;
  j["pairing"] = json::array();
  j["fragments"] = json::array();
  for (std::size_t i = 0; i < batch.fragments.size(); ++i) {
    const auto& f = batch.fragments[i];
    const auto& spec = batch.specs[i];
    j["pairing"].push_back({{"front", front_ids.at(i)}, {"back", back_ids.at(batch.pairing[i])}});
    json fr;
    fr["front"] = front_ids.at(i);
    fr["back"] = back_ids.at(batch.pairing[i]);
    fr["front_pose"] = to_json(f.truth.front_pose);
    fr["back_pose"] = to_json(f.truth.back_pose);
    fr["back_to_front"] = to_json(f.truth.back_to_front());
    fr["front_boundary"] = f.truth.front_boundary.indices;
    fr["back_boundary"] = f.truth.back_boundary.indices;
    fr["front_overlap"] = f.truth.front_overlap;
    fr["back_overlap"] = f.truth.back_overlap;
    fr["shell_radius"] = spec.flat() ? json(nullptr) : json(spec.shell_radius);
    fr["thickness"] = spec.thickness;
    fr["sample_spacing"] = spec.sample_spacing;
    fr["noise_sigma"] = spec.noise_sigma;
    fr["seed"] = spec.seed;
    j["fragments"].push_back(std::move(fr));
  }
  return j.dump(2);
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::IoError, "write failed: " + path.string());
}

}  // namespace sherdreg
