#include "sherdreg/config.hpp"

#include "sherdreg/errors.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

namespace sherdreg {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double d = std::stod(v, &used);
    if (used != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw Error(ErrorCode::FormatError, "config key '" + key + "': not a number: " + v);
  }
}

std::uint64_t parse_uint(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || ptr != v.data() + v.size()) {
    throw Error(ErrorCode::FormatError, "config key '" + key + "': not a non-negative integer: " + v);
  }
  return out;
}

}  // namespace

void PipelineConfig::validate() const {
  require(n_c >= 8, "n_c must be at least 8");
  require(alpha >= 0.0 && std::isfinite(alpha), "alpha must be non-negative (0 = automatic)");
  require(boundary.k >= 4, "boundary k must be at least 4");
  require(boundary.gap_threshold > 0.0 && boundary.gap_threshold < 2.0 * std::numbers::pi,
          "gap threshold must lie in (0, 2*pi)");
  require(boundary.pixel_threshold > 0.0, "pixel threshold must be positive");
  bbicp.validate();
  require(completeness_threshold > 0.0, "completeness threshold must be positive");
  require(accuracy_percentile >= 0.0 && accuracy_percentile <= 100.0, "accuracy percentile must lie in [0, 100]");
  require(jobs >= 1, "jobs must be at least 1");
}

std::string PipelineConfig::to_text() const {
  std::ostringstream o;
  o << "n_c = " << n_c << '\n';
  o << "alpha = " << fmt(alpha) << '\n';
  o << "boundary_k = " << boundary.k << '\n';
  o << "gap_threshold = " << fmt(boundary.gap_threshold) << '\n';
  o << "pixel_threshold = " << fmt(boundary.pixel_threshold) << '\n';
  o << "max_iterations = " << bbicp.max_iterations << '\n';
  o << "convergence_tol = " << fmt(bbicp.convergence_tol) << '\n';
  o << "reject_distance = " << fmt(bbicp.correspondence_reject_distance.value_or(0.0)) << '\n';
  o << "min_correspondences = " << bbicp.min_correspondences << '\n';
  o << "completeness_threshold = " << fmt(completeness_threshold) << '\n';
  o << "accuracy_percentile = " << fmt(accuracy_percentile) << '\n';
  o << "jobs = " << jobs << '\n';
  o << "seed = " << seed << '\n';
  return o.str();
}

void PipelineConfig::apply_text(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty() || line.front() == '[') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::FormatError, "config line " + std::to_string(line_no) + ": expected key = value");
    }
    const std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') value = value.substr(1, value.size() - 2);

    if (key == "n_c") n_c = parse_uint(key, value);
    else if (key == "alpha") alpha = parse_double(key, value);
    else if (key == "boundary_k") boundary.k = parse_uint(key, value);
    else if (key == "gap_threshold") boundary.gap_threshold = parse_double(key, value);
    else if (key == "pixel_threshold") boundary.pixel_threshold = parse_double(key, value);
    else if (key == "max_iterations") bbicp.max_iterations = static_cast<int>(parse_uint(key, value));
    else if (key == "convergence_tol") bbicp.convergence_tol = parse_double(key, value);
    else if (key == "reject_distance") {
      const double d = parse_double(key, value);
      bbicp.correspondence_reject_distance = d > 0.0 ? std::optional<double>(d) : std::nullopt;
    } else if (key == "min_correspondences") bbicp.min_correspondences = parse_uint(key, value);
    else if (key == "completeness_threshold") completeness_threshold = parse_double(key, value);
    else if (key == "accuracy_percentile") accuracy_percentile = parse_double(key, value);
    else if (key == "jobs") jobs = static_cast<unsigned>(parse_uint(key, value));
    else if (key == "seed") seed = parse_uint(key, value);
    else throw Error(ErrorCode::FormatError, "unknown config key '" + key + "'");
  }
}

PipelineConfig PipelineConfig::from_text(const std::string& text) {
  PipelineConfig c;
  c.apply_text(text);
  return c;
}

PipelineConfig PipelineConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_text(buf.str());
}

void PipelineConfig::save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot write config " + path.string());
  out << to_text();
}

}  // namespace sherdreg
