#include "sherdreg/ply_io.hpp"

#include "sherdreg/errors.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace sherdreg {
namespace {

static_assert(std::endian::native == std::endian::little, "binary PLY support assumes a little-endian host");

enum class ScalarType { Int8, UInt8, Int16, UInt16, Int32, UInt32, Float32, Float64 };

std::optional<ScalarType> parse_type(const std::string& s) {
  if (s == "char" || s == "int8") return ScalarType::Int8;
  if (s == "uchar" || s == "uint8") return ScalarType::UInt8;
  if (s == "short" || s == "int16") return ScalarType::Int16;
  if (s == "ushort" || s == "uint16") return ScalarType::UInt16;
  if (s == "int" || s == "int32") return ScalarType::Int32;
  if (s == "uint" || s == "uint32") return ScalarType::UInt32;
  if (s == "float" || s == "float32") return ScalarType::Float32;
  if (s == "double" || s == "float64") return ScalarType::Float64;
  return std::nullopt;
}

std::size_t type_size(ScalarType t) {
  switch (t) {
    case ScalarType::Int8:
    case ScalarType::UInt8: return 1;
    case ScalarType::Int16:
    case ScalarType::UInt16: return 2;
    case ScalarType::Int32:
    case ScalarType::UInt32:
    case ScalarType::Float32: return 4;
    case ScalarType::Float64: return 8;
  }
  return 0;
}

struct Property {
  std::string name;
  ScalarType type = ScalarType::Float32;
  bool is_list = false;
  ScalarType count_type = ScalarType::UInt8;
};

struct Element {
  std::string name;
  std::size_t count = 0;
  std::vector<Property> properties;
};

struct Header {
  bool ascii = false;
  std::vector<Element> elements;
};

[[noreturn]] void format_error(const std::string& what) { throw Error(ErrorCode::FormatError, "PLY: " + what); }

Header parse_header(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("ply", 0) != 0) format_error("missing magic line");
  Header h;
  bool have_format = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ss(line);
    std::string key;
    ss >> key;
    if (key.empty() || key == "comment" || key == "obj_info") continue;
    if (key == "end_header") {
      if (!have_format) format_error("missing format line");
      return h;
    }
    if (key == "format") {
      std::string fmt;
      ss >> fmt;
      if (fmt == "ascii") {
        h.ascii = true;
      } else if (fmt == "binary_little_endian") {
        h.ascii = false;
      } else {
        format_error("unsupported format '" + fmt + "'");
      }
      have_format = true;
    } else if (key == "element") {
      Element e;
      ss >> e.name >> e.count;
      if (!ss) format_error("malformed element line: " + line);
      h.elements.push_back(std::move(e));
    } else if (key == "property") {
      if (h.elements.empty()) format_error("property before any element");
      Property p;
      std::string type;
      ss >> type;
      if (type == "list") {
        std::string count_type;
        std::string item_type;
        ss >> count_type >> item_type >> p.name;
        auto ct = parse_type(count_type);
        auto it = parse_type(item_type);
        if (!ct || !it) format_error("unknown list type in: " + line);
        p.is_list = true;
        p.count_type = *ct;
        p.type = *it;
      } else {
        auto t = parse_type(type);
        if (!t) format_error("unknown property type '" + type + "'");
        p.type = *t;
        ss >> p.name;
      }
      if (!ss) format_error("malformed property line: " + line);
      h.elements.back().properties.push_back(std::move(p));
    } else {
      format_error("unexpected header line: " + line);
    }
  }
  format_error("unterminated header");
}

double read_binary_scalar(std::istream& in, ScalarType t) {
  std::array<char, 8> buf{};
  const auto n = type_size(t);
  if (!in.read(buf.data(), static_cast<std::streamsize>(n))) format_error("unexpected end of binary data");
  switch (t) {
    case ScalarType::Int8: { std::int8_t v; std::memcpy(&v, buf.data(), 1); return v; }
    case ScalarType::UInt8: { std::uint8_t v; std::memcpy(&v, buf.data(), 1); return v; }
    case ScalarType::Int16: { std::int16_t v; std::memcpy(&v, buf.data(), 2); return v; }
    case ScalarType::UInt16: { std::uint16_t v; std::memcpy(&v, buf.data(), 2); return v; }
    case ScalarType::Int32: { std::int32_t v; std::memcpy(&v, buf.data(), 4); return v; }
    case ScalarType::UInt32: { std::uint32_t v; std::memcpy(&v, buf.data(), 4); return v; }
    case ScalarType::Float32: { float v; std::memcpy(&v, buf.data(), 4); return v; }
    case ScalarType::Float64: { double v; std::memcpy(&v, buf.data(), 8); return v; }
  }
  return 0.0;
}

double read_ascii_scalar(std::istream& in) {
  std::string tok;
  if (!(in >> tok)) format_error("unexpected end of ASCII data");
  try {
    std::size_t used = 0;
    const double v = std::stod(tok, &used);
    if (used != tok.size()) format_error("bad number '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    format_error("bad number '" + tok + "'");
  }
}

bool is_xyz_type(ScalarType t) { return t == ScalarType::Float32 || t == ScalarType::Float64; }

}  // namespace

PointCloud read_ply(std::istream& in) {
  const Header h = parse_header(in);
  auto read_scalar = [&](ScalarType t) { return h.ascii ? read_ascii_scalar(in) : read_binary_scalar(in, t); };

  std::vector<Vec3> points;
  std::vector<std::vector<int>> visibility;
  bool have_vertex = false;

  for (const auto& e : h.elements) {
    const bool is_vertex = e.name == "vertex";
    std::array<int, 3> xyz{-1, -1, -1};
    int vis = -1;
    if (is_vertex) {
      have_vertex = true;
      for (int i = 0; i < static_cast<int>(e.properties.size()); ++i) {
        const auto& p = e.properties[i];
        const int axis = p.name == "x" ? 0 : p.name == "y" ? 1 : p.name == "z" ? 2 : -1;
        if (axis >= 0 && !p.is_list) {
          if (!is_xyz_type(p.type)) format_error("coordinate '" + p.name + "' must be float or double");
          xyz[axis] = i;
        } else if (p.name == "visibility" && p.is_list) {
          vis = i;
        }
      }
      if (xyz[0] < 0 || xyz[1] < 0 || xyz[2] < 0) format_error("vertex element lacks x, y, z");
      points.reserve(e.count);
      if (vis >= 0) visibility.reserve(e.count);
    }

    for (std::size_t item = 0; item < e.count; ++item) {
      Vec3 p = Vec3::Zero();
      std::vector<int> views;
      for (int i = 0; i < static_cast<int>(e.properties.size()); ++i) {
        const auto& prop = e.properties[i];
        if (prop.is_list) {
          const double n = read_scalar(prop.count_type);
          if (n < 0 || n != std::floor(n)) format_error("bad list length");
          for (std::size_t k = 0; k < static_cast<std::size_t>(n); ++k) {
            const double v = read_scalar(prop.type);
            if (is_vertex && i == vis) views.push_back(static_cast<int>(v));
          }
          continue;
        }
        const double v = read_scalar(prop.type);
        if (is_vertex) {
          for (int a = 0; a < 3; ++a)
            if (xyz[a] == i) p(a) = v;
        }
      }
      if (is_vertex) {
        points.push_back(p);
        if (vis >= 0) visibility.push_back(std::move(views));
      }
    }
  }
  if (!have_vertex) format_error("no vertex element");
  return PointCloud(std::move(points), std::move(visibility));
}

PointCloud read_ply(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  return read_ply(in);
}

void write_ply(std::ostream& out, const PointCloud& cloud, const PlyWriteOptions& options) {
  const bool ascii = options.format == PlyFormat::Ascii;
  const char* scalar = options.double_precision ? "double" : "float";
  out << "ply\n" << (ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n");
  out << "element vertex " << cloud.size() << "\n";
  out << "property " << scalar << " x\nproperty " << scalar << " y\nproperty " << scalar << " z\n";
  if (cloud.has_visibility()) out << "property list uchar int visibility\n";
  out << "end_header\n";

  if (ascii) out << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (std::size_t i = 0; i < cloud.size(); ++i) {
    const Vec3& p = cloud[i];
    if (ascii) {
      if (options.double_precision) {
        out << p.x() << ' ' << p.y() << ' ' << p.z();
      } else {
        out << static_cast<float>(p.x()) << ' ' << static_cast<float>(p.y()) << ' ' << static_cast<float>(p.z());
      }
      if (cloud.has_visibility()) {
        const auto& v = cloud.visibility()[i];
        out << ' ' << v.size();
        for (int c : v) out << ' ' << c;
      }
      out << '\n';
      continue;
    }
    for (int a = 0; a < 3; ++a) {
      if (options.double_precision) {
        const double v = p(a);
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      } else {
        const float v = static_cast<float>(p(a));
        out.write(reinterpret_cast<const char*>(&v), sizeof v);
      }
    }
    if (cloud.has_visibility()) {
      const auto& v = cloud.visibility()[i];
      if (v.size() > 255) throw Error(ErrorCode::FormatError, "PLY: visibility list longer than 255 entries");
      const auto n = static_cast<std::uint8_t>(v.size());
      out.write(reinterpret_cast<const char*>(&n), 1);
      for (int c : v) {
        const std::int32_t c32 = c;
        out.write(reinterpret_cast<const char*>(&c32), sizeof c32);
      }
    }
  }
  if (!out) throw Error(ErrorCode::IoError, "PLY write failed");
}

void write_ply(const std::filesystem::path& path, const PointCloud& cloud, const PlyWriteOptions& options) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  write_ply(out, cloud, options);
}

}  // namespace sherdreg
