#pragma once

#include "sherdreg/boundary.hpp"
#include "sherdreg/contour.hpp"
#include "sherdreg/matching.hpp"
#include "sherdreg/registration.hpp"
#include "sherdreg/synth.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace sherdreg {

// JSON documents exchanged by the CLI. Rotations are 3x3 row-major arrays,
// translations 3-vectors in mm.

std::string contour_json(const Contour& contour, const ShapeDescriptor& descriptor);

std::string transform_json(const RigidTransform& t);
RigidTransform parse_transform_json(const std::string& text);

std::string boundary_json(const BoundarySet& b);
BoundarySet parse_boundary_json(const std::string& text);

std::string assignment_json(const BatchAssignment& a, const std::vector<std::string>& front_ids,
                            const std::vector<std::string>& back_ids);

std::string registration_json(const RegistrationResult& r);

/// iteration,objective,correspondences,nn_queries
std::string trace_csv(const RegistrationResult& r);

/// Pairing, poses, boundary labels and overlap fractions of a synthetic batch.
std::string truth_json(const SyntheticBatch& batch, const std::vector<std::string>& front_ids,
                       const std::vector<std::string>& back_ids);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

}  // namespace sherdreg
