#pragma once

#include "sherdreg/geometry.hpp"

#include <filesystem>
#include <iosfwd>

namespace sherdreg {

enum class PlyFormat { Ascii, BinaryLittleEndian };

struct PlyWriteOptions {
  PlyFormat format = PlyFormat::BinaryLittleEndian;
  bool double_precision = true;  // float64 x,y,z; float32 otherwise
};

/// Reads the `vertex` element of an ASCII or binary little-endian PLY file.
/// x, y, z may be float32 or float64; a `visibility` list property is read
/// into the cloud's visibility lists; every other property and element is
/// skipped.
PointCloud read_ply(const std::filesystem::path& path);
PointCloud read_ply(std::istream& in);

/// Writes x, y, z (and `visibility` when the cloud carries it).
void write_ply(const std::filesystem::path& path, const PointCloud& cloud, const PlyWriteOptions& options = {});
void write_ply(std::ostream& out, const PointCloud& cloud, const PlyWriteOptions& options = {});

}  // namespace sherdreg
