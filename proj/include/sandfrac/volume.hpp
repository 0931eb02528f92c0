#ifndef SANDFRAC_VOLUME_HPP
#define SANDFRAC_VOLUME_HPP

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "sandfrac/csv_io.hpp"
#include "sandfrac/cube.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/mlp.hpp"
#include "sandfrac/model_io.hpp"
#include "sandfrac/spline.hpp"
#include "sandfrac/tsk_model.hpp"

namespace sandfrac {

namespace detail {

inline InferResult cell_predict(const TskModel& m, std::span<const double> x) { return infer_detail(m, x); }

inline InferResult cell_predict(const MlpModel& m, std::span<const double> x) {
  InferResult r;
  r.value = mlp_infer(m, x);
  return r;
}

}  // namespace detail

/// Per-cell inference over the whole grid. Cells where any input attribute
/// is NaN are masked. Predictions are clamped to [0, 1].
template <class Model>
PropertyCube predict_cube(const Model& model, const SeismicCube& cube) {
  std::vector<const AttributeVolume*> inputs;
  for (const auto& name : model.attribute_names) {
    const auto* vol = cube.find(name);
    if (!vol) throw ParameterError("cube has no attribute grid named '" + name + "'");
    inputs.push_back(vol);
  }
  PropertyCube out;
  out.geometry = cube.geometry;
  const std::size_t n = cube.geometry.cells();
  out.values.assign(n, 0.0);
  out.mask.assign(n, 0);
  std::vector<double> x(inputs.size());
  for (std::size_t c = 0; c < n; ++c) {
    bool null = false;
    for (std::size_t j = 0; j < inputs.size(); ++j) {
      x[j] = inputs[j]->values[c];
      null |= std::isnan(x[j]);
    }
    if (null) {
      out.mask[c] = 1;
      out.values[c] = std::numeric_limits<double>::quiet_NaN();
      ++out.diagnostics.masked;
      continue;
    }
    const InferResult r = detail::cell_predict(model, x);
    out.diagnostics.degenerate += r.degenerate ? 1 : 0;
    double v = r.value;
    if (v < 0.0 || v > 1.0) {
      v = std::clamp(v, 0.0, 1.0);
      ++out.diagnostics.clamped;
    }
    out.values[c] = v;
  }
  return out;
}

inline PropertyCube predict_cube(const AnyModel& model, const SeismicCube& cube) {
  return std::visit([&](const auto& m) { return predict_cube(m, cube); }, model);
}

/// Row-major 2-D image (rows = crossline, cols = time for an inline slice).
struct Image {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> values;

  double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
  double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
};

struct MedianWindow {
  std::size_t rows = 3;  // crossline extent
  std::size_t cols = 5;  // time extent

  void validate() const {
    if (rows % 2 == 0 || cols % 2 == 0) throw ParameterError("median window dimensions must be odd");
  }
};

namespace detail {

// Median of the unmasked members of a centered window with replicate
// padding. Even member counts average the two middle order statistics.
// Returns false when every member is masked.
inline bool window_median(const double* values, const std::uint8_t* mask, std::size_t rows, std::size_t cols,
                          std::size_t r, std::size_t c, const MedianWindow& w, std::vector<double>& buf,
                          double& out) {
  buf.clear();
  const auto hr = static_cast<long>(w.rows / 2), hc = static_cast<long>(w.cols / 2);
  for (long dr = -hr; dr <= hr; ++dr) {
    const auto rr = static_cast<std::size_t>(std::clamp(static_cast<long>(r) + dr, 0L, static_cast<long>(rows) - 1));
    for (long dc = -hc; dc <= hc; ++dc) {
      const auto cc = static_cast<std::size_t>(std::clamp(static_cast<long>(c) + dc, 0L, static_cast<long>(cols) - 1));
      const std::size_t i = rr * cols + cc;
      if (mask && mask[i]) continue;
      buf.push_back(values[i]);
    }
  }
  if (buf.empty()) return false;
  const std::size_t k = buf.size();
  auto mid = buf.begin() + static_cast<std::ptrdiff_t>(k / 2);
  std::nth_element(buf.begin(), mid, buf.end());
  if (k % 2 == 1) {
    out = *mid;
  } else {
    const double upper = *mid;
    const double lower = *std::max_element(buf.begin(), mid);
    out = lower + (upper - lower) / 2.0;
  }
  return true;
}

}  // namespace detail

/// 2-D median filter with replicate padding; a 3x5 window takes the 8th of
/// 15 ordered values.
inline Image median_filter_inline(const Image& image, const MedianWindow& window = {}) {
  window.validate();
  if (image.values.size() != image.rows * image.cols) throw ParameterError("image size mismatch");
  Image out = image;
  std::vector<double> buf;
  for (std::size_t r = 0; r < image.rows; ++r)
    for (std::size_t c = 0; c < image.cols; ++c)
      detail::window_median(image.values.data(), nullptr, image.rows, image.cols, r, c, window, buf, out.at(r, c));
  return out;
}

/// Inline slice as an image (rows = crossline, cols = time).
inline Image inline_slice(const PropertyCube& pc, std::size_t inline_index) {
  if (inline_index >= pc.geometry.n_inline)
    throw ParameterError("inline index " + std::to_string(inline_index) + " out of range");
  const auto& g = pc.geometry;
  Image img{g.n_crossline, g.n_t, {}};
  const auto first = pc.values.begin() + static_cast<std::ptrdiff_t>(g.index(inline_index, 0, 0));
  img.values.assign(first, first + static_cast<std::ptrdiff_t>(g.n_crossline * g.n_t));
  return img;
}

/// Median-filter every inline slice independently. Masked cells stay
/// masked and are excluded from their neighbours' windows.
inline PropertyCube smooth_cube(const PropertyCube& pc, const MedianWindow& window = {}) {
  window.validate();
  const auto& g = pc.geometry;
  PropertyCube out = pc;
  const std::size_t slice = g.n_crossline * g.n_t;
  std::vector<double> buf;
  for (std::size_t il = 0; il < g.n_inline; ++il) {
    const double* values = pc.values.data() + il * slice;
    const std::uint8_t* mask = pc.mask.data() + il * slice;
    for (std::size_t xl = 0; xl < g.n_crossline; ++xl)
      for (std::size_t t = 0; t < g.n_t; ++t) {
        const std::size_t i = xl * g.n_t + t;
        if (mask[i]) continue;
        detail::window_median(values, mask, g.n_crossline, g.n_t, xl, t, window, buf, out.values[il * slice + i]);
      }
  }
  return out;
}

/// Write an inline slice as a headerless CSV grid: one row per time
/// sample, one column per crossline; masked cells are `nan`.
inline void export_slice(std::ostream& out, const PropertyCube& pc, std::size_t inline_index) {
  if (inline_index >= pc.geometry.n_inline)
    throw ParameterError("inline index " + std::to_string(inline_index) + " out of range");
  const auto& g = pc.geometry;
  for (std::size_t t = 0; t < g.n_t; ++t) {
    for (std::size_t xl = 0; xl < g.n_crossline; ++xl) {
      const std::size_t i = g.index(inline_index, xl, t);
      if (xl) out << ',';
      out << (pc.masked(i) ? std::string("nan") : format_real(pc.values[i]));
    }
    out << '\n';
  }
}

inline void export_slice(const std::string& path, const PropertyCube& pc, std::size_t inline_index) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  export_slice(out, pc, inline_index);
}

struct WellOverlay {
  std::size_t inline_index = 0;
  std::size_t crossline_index = 0;
  std::vector<double> time_ms;
  std::vector<double> target;
};

/// CSV `time_ms,target,predicted` for the well samples inside the cube's
/// time span; the prediction is spline-interpolated along the well's trace.
/// Returns the number of rows written.
inline std::size_t export_overlay(std::ostream& out, const PropertyCube& pc, const WellOverlay& well) {
  const auto& g = pc.geometry;
  if (well.inline_index >= g.n_inline || well.crossline_index >= g.n_crossline)
    throw ParameterError("overlay well location outside the cube");
  if (well.time_ms.size() != well.target.size()) throw ParameterError("overlay well series length mismatch");
  std::vector<double> t(g.n_t), y(g.n_t);
  bool any_masked = false;
  for (std::size_t k = 0; k < g.n_t; ++k) {
    const std::size_t i = g.index(well.inline_index, well.crossline_index, k);
    t[k] = g.time(k);
    y[k] = pc.values[i];
    any_masked |= pc.masked(i);
  }
  std::optional<CubicSpline> spline;
  if (!any_masked && g.n_t >= 4) spline.emplace(t, y);
  out << "time_ms,target,predicted\n";
  std::size_t rows = 0;
  for (std::size_t k = 0; k < well.time_ms.size(); ++k) {
    const double tm = well.time_ms[k];
    if (!(tm >= g.t0 && tm <= g.t_end())) continue;
    const double pred = spline ? (*spline)(tm) : std::numeric_limits<double>::quiet_NaN();
    out << format_real(tm) << ',' << format_real(well.target[k]) << ',' << format_real(pred) << '\n';
    ++rows;
  }
  return rows;
}

inline std::size_t export_overlay(const std::string& path, const PropertyCube& pc, const WellOverlay& well) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  return export_overlay(out, pc, well);
}

}  // namespace sandfrac

#endif  // SANDFRAC_VOLUME_HPP
