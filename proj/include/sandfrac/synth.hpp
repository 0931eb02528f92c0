#ifndef SANDFRAC_SYNTH_HPP
#define SANDFRAC_SYNTH_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include "sandfrac/csv_io.hpp"
#include "sandfrac/cube.hpp"
#include "sandfrac/dataset.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/rng.hpp"

// Synthetic survey generator.
//
// Three unit-variance random fields u1, u2, u3 are sums of plane waves
//   u(il, xl, t) = sum_q A_q sin(2 pi (k_q il / n_il + l_q xl / n_xl) + w_q t + phi_q)
// with 1-D wavenumbers in [-1.5, 1.5] cycles per survey and time periods in
// [30, 120] ms. The standardized attributes are correlated mixtures
//   z1 = u1,  z2 = 0.6 u1 + 0.8 u2,  z3 = 0.4 u2 + sqrt(0.84) u3
// mapped to impedance = 6500 + 900 z1, amplitude = 1.5 z2,
// inst_freq = 32 + 6 z3. The sand fraction is
//   s = sigmoid(g(z)),  g(z) = 1.4 z1 - 0.9 z2 + 0.8 sin(1.5 z3) + 0.5 z1 z3.
// With noise sigma > 0, cube attributes get N(0, sigma^2) noise in z units
// and well targets get N(0, sigma^2) noise clamped to [0, 1]. The ground
// truth cube is s on the clean fields.

namespace sandfrac {

struct SynthConfig {
  std::uint64_t seed = 7;
  std::size_t n_wells = 6;
  std::size_t n_inline = 64;
  std::size_t n_crossline = 64;
  std::size_t n_t = 128;
  double t0 = 0.0;
  double dt = 2.0;
  double well_dt = 0.5;
  double noise = 0.02;

  void validate() const {
    if (n_inline < 1 || n_crossline < 1 || n_t < 4) throw ParameterError("synthetic cube needs n_t >= 4");
    if (!(dt > 0.0) || !(well_dt > 0.0)) throw ParameterError("sampling steps must be positive");
    if (!(noise >= 0.0)) throw ParameterError("noise sigma must be >= 0");
    if (n_wells > n_inline * n_crossline) throw ParameterError("more wells than traces");
  }
};

inline const std::array<std::string, 3> kSynthAttributes{"impedance", "amplitude", "inst_freq"};

class SynthField {
 public:
  static constexpr std::size_t kTerms = 6;

  SynthField(const SynthConfig& cfg, Rng& rng) : n_il_(double(cfg.n_inline)), n_xl_(double(cfg.n_crossline)) {
    double power = 0.0;
    for (auto& w : waves_) {
      w.amp = rng.uniform(0.5, 1.0);
      w.k = rng.uniform(-1.5, 1.5);
      w.l = rng.uniform(-1.5, 1.5);
      w.omega = 2.0 * std::numbers::pi / rng.uniform(30.0, 120.0);
      w.phase = rng.uniform(0.0, 2.0 * std::numbers::pi);
      power += w.amp * w.amp / 2.0;
    }
    norm_ = 1.0 / std::sqrt(power);
  }

  double operator()(double il, double xl, double t) const {
    double s = 0.0;
    for (const auto& w : waves_)
      s += w.amp * std::sin(2.0 * std::numbers::pi * (w.k * il / n_il_ + w.l * xl / n_xl_) + w.omega * t + w.phase);
    return s * norm_;
  }

 private:
  struct Wave {
    double amp, k, l, omega, phase;
  };
  std::array<Wave, kTerms> waves_{};
  double n_il_, n_xl_;
  double norm_ = 1.0;
};

/// Deterministic clean attribute model of one synthetic survey.
class SynthModel {
 public:
  explicit SynthModel(const SynthConfig& cfg) : rng_(cfg.seed), u1_(cfg, rng_), u2_(cfg, rng_), u3_(cfg, rng_) {}

  /// Standardized attributes (z1, z2, z3).
  std::array<double, 3> z(double il, double xl, double t) const {
    const double a = u1_(il, xl, t), b = u2_(il, xl, t), c = u3_(il, xl, t);
    return {a, 0.6 * a + 0.8 * b, 0.4 * b + std::sqrt(0.84) * c};
  }

  static std::array<double, 3> raw_from_z(const std::array<double, 3>& z) {
    return {6500.0 + 900.0 * z[0], 1.5 * z[1], 32.0 + 6.0 * z[2]};
  }

  static double nominal_scale(std::size_t k) { return std::array{900.0, 1.5, 6.0}[k]; }

  static double sand_fraction(const std::array<double, 3>& z) {
    const double g = 1.4 * z[0] - 0.9 * z[1] + 0.8 * std::sin(1.5 * z[2]) + 0.5 * z[0] * z[2];
    return 1.0 / (1.0 + std::exp(-g));
  }

  Rng& rng() { return rng_; }

 private:
  Rng rng_;
  SynthField u1_, u2_, u3_;
};

struct SynthOutput {
  SeismicCube cube;                    // noisy observed attributes
  AttributeVolume truth;               // clean sand fraction
  Dataset well_logs;                   // well_id, time_ms, sand_fraction
  std::vector<WellLocation> locations;
};

inline SynthOutput synthesize(const SynthConfig& cfg) {
  cfg.validate();
  SynthModel model(cfg);
  Rng& rng = model.rng();
  CubeGeometry g{cfg.n_inline, cfg.n_crossline, cfg.n_t, cfg.t0, cfg.dt};

  SynthOutput out;
  std::array<AttributeVolume, 3> vols;
  for (std::size_t k = 0; k < 3; ++k) vols[k] = {kSynthAttributes[k], g, std::vector<float>(g.cells())};
  out.truth = {"sand_fraction", g, std::vector<float>(g.cells())};
  for (std::size_t il = 0; il < g.n_inline; ++il)
    for (std::size_t xl = 0; xl < g.n_crossline; ++xl)
      for (std::size_t t = 0; t < g.n_t; ++t) {
        const std::size_t i = g.index(il, xl, t);
        const auto z = model.z(double(il), double(xl), g.time(t));
        out.truth.values[i] = static_cast<float>(SynthModel::sand_fraction(z));
        auto zn = z;
        if (cfg.noise > 0.0)
          for (auto& v : zn) v += cfg.noise * rng.normal();
        const auto raw = SynthModel::raw_from_z(zn);
        for (std::size_t k = 0; k < 3; ++k) vols[k].values[i] = static_cast<float>(raw[k]);
      }
  for (auto& v : vols) out.cube.add(std::move(v));

  // Well traces: distinct, away from the survey edges where possible.
  const std::size_t margin_il = g.n_inline > 8 ? 4 : 0, margin_xl = g.n_crossline > 8 ? 4 : 0;
  std::vector<std::pair<std::size_t, std::size_t>> used;
  for (std::size_t w = 0; w < cfg.n_wells; ++w) {
    std::pair<std::size_t, std::size_t> pos;
    do {
      pos.first = margin_il + rng.index(g.n_inline - 2 * margin_il);
      pos.second = margin_xl + rng.index(g.n_crossline - 2 * margin_xl);
    } while (std::find(used.begin(), used.end(), pos) != used.end());
    used.push_back(pos);
    out.locations.push_back({"W" + std::to_string(w + 1), pos.first, pos.second});
  }

  // Log rows extend four samples past each end of the seismic trace.
  out.well_logs.attribute_names = {};
  const double start = g.t0 - 4.0 * cfg.well_dt;
  const double stop = g.t_end() + 4.0 * cfg.well_dt;
  const auto n_rows = static_cast<std::size_t>(std::floor((stop - start) / cfg.well_dt + 1e-9)) + 1;
  for (const auto& loc : out.locations) {
    for (std::size_t k = 0; k < n_rows; ++k) {
      const double t = start + cfg.well_dt * static_cast<double>(k);
      const auto z = model.z(double(loc.inline_index), double(loc.crossline_index), t);
      double s = SynthModel::sand_fraction(z);
      if (cfg.noise > 0.0) s = std::clamp(s + cfg.noise * rng.normal(), 0.0, 1.0);
      out.well_logs.samples.push_back({{}, s, loc.well_id, t});
    }
  }
  return out;
}

}  // namespace sandfrac

#endif  // SANDFRAC_SYNTH_HPP
