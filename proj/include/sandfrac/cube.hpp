#ifndef SANDFRAC_CUBE_HPP
#define SANDFRAC_CUBE_HPP

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "sandfrac/csv_io.hpp"
#include "sandfrac/error.hpp"

namespace sandfrac {

/// Regular (inline, crossline, time) grid; cells stored row-major with time
/// fastest.
struct CubeGeometry {
  std::size_t n_inline = 0;
  std::size_t n_crossline = 0;
  std::size_t n_t = 0;
  double t0 = 0.0;  // ms
  double dt = 1.0;  // ms

  std::size_t cells() const noexcept { return n_inline * n_crossline * n_t; }
  std::size_t index(std::size_t il, std::size_t xl, std::size_t t) const noexcept {
    return (il * n_crossline + xl) * n_t + t;
  }
  double time(std::size_t t) const noexcept { return t0 + dt * static_cast<double>(t); }
  double t_end() const noexcept { return time(n_t - 1); }

  void validate() const {
    if (n_inline == 0 || n_crossline == 0 || n_t == 0)
      throw ParameterError("cube dimensions must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt) || !std::isfinite(t0))
      throw ParameterError("cube time axis needs finite t0 and dt > 0");
  }

  friend bool operator==(const CubeGeometry&, const CubeGeometry&) = default;
};

/// One attribute on the grid. NaN marks null cells.
struct AttributeVolume {
  std::string name;
  CubeGeometry geometry;
  std::vector<float> values;

  float at(std::size_t il, std::size_t xl, std::size_t t) const { return values[geometry.index(il, xl, t)]; }
};

struct SeismicCube {
  CubeGeometry geometry;
  std::vector<AttributeVolume> attributes;

  const AttributeVolume* find(const std::string& name) const {
    for (const auto& a : attributes)
      if (a.name == name) return &a;
    return nullptr;
  }

  void add(AttributeVolume vol) {
    if (attributes.empty()) {
      vol.geometry.validate();
      geometry = vol.geometry;
    } else if (!(vol.geometry == geometry)) {
      throw InputError("attribute '" + vol.name + "' does not share the cube geometry");
    }
    if (vol.values.size() != geometry.cells())
      throw InputError("attribute '" + vol.name + "' has the wrong number of cells");
    if (find(vol.name)) throw InputError("duplicate attribute '" + vol.name + "'");
    attributes.push_back(std::move(vol));
  }
};

struct PropertyDiagnostics {
  std::size_t masked = 0;
  std::size_t degenerate = 0;  // fallback inference cells
  std::size_t clamped = 0;
};

/// Predicted property on the grid with a mask of cells lacking a value.
struct PropertyCube {
  CubeGeometry geometry;
  std::vector<double> values;
  std::vector<std::uint8_t> mask;  // 1 = masked
  PropertyDiagnostics diagnostics;

  bool masked(std::size_t i) const noexcept { return mask[i] != 0; }
};

inline constexpr const char* kCubeMagic = "SFCUBE1";

namespace detail {

inline std::uint32_t to_little_endian(std::uint32_t v) {
  if constexpr (std::endian::native == std::endian::big)
    v = ((v & 0xFF) << 24) | ((v & 0xFF00) << 8) | ((v >> 8) & 0xFF00) | (v >> 24);
  return v;
}

}  // namespace detail

/// Text header `SFCUBE1 n_inline n_crossline n_t t0 dt attr_name` followed
/// by a newline and row-major little-endian float32 values.
inline void write_cube(std::ostream& out, const AttributeVolume& vol) {
  const auto& g = vol.geometry;
  if (vol.name.empty() || vol.name.find_first_of(" \t\r\n") != std::string::npos)
    throw ParameterError("cube attribute name must be non-empty without whitespace");
  out << kCubeMagic << ' ' << g.n_inline << ' ' << g.n_crossline << ' ' << g.n_t << ' '
      << format_real(g.t0) << ' ' << format_real(g.dt) << ' ' << vol.name << '\n';
  std::vector<std::uint32_t> raw(vol.values.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    raw[i] = detail::to_little_endian(std::bit_cast<std::uint32_t>(vol.values[i]));
  out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
}

inline void write_cube(const std::string& path, const AttributeVolume& vol) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  write_cube(out, vol);
  if (!out) throw InputError("failed writing '" + path + "'");
}

inline AttributeVolume read_cube(std::istream& in, const std::string& source = "cube") {
  std::string header;
  if (!std::getline(in, header)) throw InputError(source + ": missing SFCUBE1 header");
  std::istringstream hs(header);
  std::string magic;
  AttributeVolume vol;
  auto& g = vol.geometry;
  if (!(hs >> magic) || magic != kCubeMagic) throw InputError(source + ": not an SFCUBE1 file");
  std::string t0, dt;
  if (!(hs >> g.n_inline >> g.n_crossline >> g.n_t >> t0 >> dt >> vol.name))
    throw InputError(source + ": malformed SFCUBE1 header");
  g.t0 = parse_real(t0, source);
  g.dt = parse_real(dt, source);
  try {
    g.validate();
  } catch (const ParameterError& e) {
    throw InputError(source + ": " + e.what());
  }
  std::vector<std::uint32_t> raw(g.cells());
  in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size() * 4));
  if (static_cast<std::size_t>(in.gcount()) != raw.size() * 4)
    throw InputError(source + ": truncated cube payload");
  vol.values.resize(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i)
    vol.values[i] = std::bit_cast<float>(detail::to_little_endian(raw[i]));
  return vol;
}

inline AttributeVolume read_cube(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open cube file '" + path + "'");
  return read_cube(in, path);
}

inline SeismicCube read_cubes(const std::vector<std::string>& paths) {
  SeismicCube cube;
  for (const auto& p : paths) cube.add(read_cube(p));
  return cube;
}

/// Property cube as an attribute volume; masked cells become NaN.
inline AttributeVolume to_volume(const PropertyCube& pc, const std::string& name) {
  AttributeVolume vol{name, pc.geometry, std::vector<float>(pc.values.size())};
  for (std::size_t i = 0; i < pc.values.size(); ++i)
    vol.values[i] = pc.masked(i) ? std::numeric_limits<float>::quiet_NaN() : static_cast<float>(pc.values[i]);
  return vol;
}

inline PropertyCube from_volume(const AttributeVolume& vol) {
  PropertyCube pc;
  pc.geometry = vol.geometry;
  pc.values.resize(vol.values.size());
  pc.mask.resize(vol.values.size());
  for (std::size_t i = 0; i < vol.values.size(); ++i) {
    pc.mask[i] = std::isnan(vol.values[i]) ? 1 : 0;
    pc.values[i] = vol.values[i];
    pc.diagnostics.masked += pc.mask[i];
  }
  return pc;
}

}  // namespace sandfrac

#endif  // SANDFRAC_CUBE_HPP
