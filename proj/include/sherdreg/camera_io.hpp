#pragma once

#include "sherdreg/boundary.hpp"

#include <filesystem>
#include <vector>

namespace sherdreg {

/// 8-bit grayscale (or any libpng-readable) PNG; nonzero luminance = set.
Mask read_mask_png(const std::filesystem::path& path);
void write_mask_png(const std::filesystem::path& path, const Mask& mask);

/// Camera metadata document:
///   {"views": [{"intrinsics": [[fx,0,cx],[0,fy,cy],[0,0,1]],
///               "rotation": [[...],[...],[...]], "translation": [x,y,z],
///               "mask": "view_00.png"}, ...]}
/// The pose maps world (scan) coordinates into the camera frame; mask paths
/// are relative to the document.
std::vector<CameraView> read_camera_views(const std::filesystem::path& json_path);
void write_camera_views(const std::filesystem::path& json_path, const std::vector<CameraView>& views);

}  // namespace sherdreg
