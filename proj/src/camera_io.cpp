#include "sherdreg/camera_io.hpp"

#include "sherdreg/errors.hpp"

#include <json.hpp>
#include <png.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <memory>
#include <sstream>

namespace sherdreg {

namespace {

using nlohmann::json;

struct FileCloser {
  void operator()(std::FILE* f) const { if (f) std::fclose(f); }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

json mat_to_json(const Mat3& m) {
  json rows = json::array();
  for (int r = 0; r < 3; ++r) rows.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return rows;
}

Mat3 mat_from_json(const json& j, const std::string& what) {
  if (!j.is_array() || j.size() != 3) throw Error(ErrorCode::FormatError, what + " must be a 3x3 array");
  Mat3 m;
  for (int r = 0; r < 3; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || row.size() != 3) throw Error(ErrorCode::FormatError, what + " must be a 3x3 array");
    for (int c = 0; c < 3; ++c) m(r, c) = row[static_cast<std::size_t>(c)].get<double>();
  }
  return m;
}

}  // namespace

Mask read_mask_png(const std::filesystem::path& path) {
  FilePtr f(std::fopen(path.string().c_str(), "rb"));
  if (!f) throw Error(ErrorCode::IoError, "cannot open mask " + path.string());
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_stdio(&image, f.get())) {
    throw Error(ErrorCode::FormatError, "not a PNG: " + path.string() + " (" + image.message + ")");
  }
  image.format = PNG_FORMAT_GRAY;
  Mask mask;
  mask.width = static_cast<int>(image.width);
  mask.height = static_cast<int>(image.height);
  mask.pixels.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, mask.pixels.data(), 0, nullptr)) {
    png_image_free(&image);
    throw Error(ErrorCode::FormatError, "cannot decode " + path.string() + " (" + image.message + ")");
  }
  for (auto& p : mask.pixels) p = p != 0 ? 1 : 0;
  return mask;
}

void write_mask_png(const std::filesystem::path& path, const Mask& mask) {
  require(mask.width > 0 && mask.height > 0 &&
              mask.pixels.size() == static_cast<std::size_t>(mask.width) * static_cast<std::size_t>(mask.height),
          "mask dimensions do not match its pixel buffer");
  std::vector<std::uint8_t> gray(mask.pixels.size());
  for (std::size_t i = 0; i < gray.size(); ++i) gray[i] = mask.pixels[i] ? 255 : 0;
  png_image image{};
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(mask.width);
  image.height = static_cast<png_uint_32>(mask.height);
  image.format = PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.string().c_str(), 0, gray.data(), 0, nullptr)) {
    throw Error(ErrorCode::IoError, "cannot write " + path.string() + " (" + image.message + ")");
  }
}

std::vector<CameraView> read_camera_views(const std::filesystem::path& json_path) {
  std::ifstream in(json_path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open camera metadata " + json_path.string());
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, json_path.string() + ": " + e.what());
  }
  if (!doc.contains("views") || !doc["views"].is_array()) {
    throw Error(ErrorCode::FormatError, json_path.string() + ": missing \"views\" array");
  }
  std::vector<CameraView> views;
  try {
    for (const auto& v : doc["views"]) {
      RigidTransform pose;
      pose.rotation = mat_from_json(v.at("rotation"), "rotation");
      const auto& t = v.at("translation");
      if (!t.is_array() || t.size() != 3) throw Error(ErrorCode::FormatError, "translation must have 3 entries");
      pose.translation = Vec3(t[0].get<double>(), t[1].get<double>(), t[2].get<double>());
      if (!pose.is_proper(1e-6)) throw Error(ErrorCode::FormatError, "camera rotation is not a proper rotation");
      const auto mask_path = json_path.parent_path() / v.at("mask").get<std::string>();
      views.emplace_back(mat_from_json(v.at("intrinsics"), "intrinsics"), pose, read_mask_png(mask_path));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::FormatError, json_path.string() + ": " + e.what());
  }
  return views;
}

void write_camera_views(const std::filesystem::path& json_path, const std::vector<CameraView>& views) {
  json doc;
  doc["views"] = json::array();
  const std::string stem = json_path.stem().string();
  for (std::size_t i = 0; i < views.size(); ++i) {
    std::ostringstream name;
    name << stem << "_view_" << std::setw(2) << std::setfill('0') << i << ".png";
    write_mask_png(json_path.parent_path() / name.str(), views[i].mask);
    json v;
    v["intrinsics"] = mat_to_json(views[i].intrinsics);
    v["rotation"] = mat_to_json(views[i].pose.rotation);
    v["translation"] = {views[i].pose.translation.x(), views[i].pose.translation.y(), views[i].pose.translation.z()};
    v["mask"] = name.str();
    doc["views"].push_back(v);
  }
  std::ofstream out(json_path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write " + json_path.string());
  out << doc.dump(2) << '\n';
}

}  // namespace sherdreg
