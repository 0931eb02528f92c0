#ifndef SANDFRAC_PREP_HPP
#define SANDFRAC_PREP_HPP

#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "sandfrac/csv_io.hpp"
#include "sandfrac/cube.hpp"
#include "sandfrac/dataset.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/spline.hpp"

namespace sandfrac {

struct PrepSummary {
  std::size_t wells = 0;
  std::size_t rows_in = 0;
  std::size_t rows_out = 0;
  std::size_t dropped_outside_span = 0;
};

/// Attach cube attributes to well log rows. For each well the attribute
/// trace at its (inline, crossline) location is spline-interpolated to the
/// log times; rows outside the trace's time span are dropped. Extra log
/// columns are kept after the cube attributes.
inline Dataset merge_wells_with_cube(const Dataset& logs, const std::vector<WellLocation>& locations,
                                     const SeismicCube& cube, PrepSummary* summary = nullptr) {
  const auto& g = cube.geometry;
  if (cube.attributes.empty()) throw InputError("prep needs at least one cube attribute");
  std::map<std::string, WellLocation> loc;
  for (const auto& l : locations) loc[l.well_id] = l;

  Dataset out;
  for (const auto& a : cube.attributes) out.attribute_names.push_back(a.name);
  for (const auto& e : logs.attribute_names) {
    if (cube.find(e)) throw InputError("well log column '" + e + "' clashes with a cube attribute");
    out.attribute_names.push_back(e);
  }

  PrepSummary s;
  s.rows_in = logs.size();
  const auto ids = well_ids(logs);
  s.wells = ids.size();
  std::vector<double> knots_t(g.n_t);
  for (std::size_t k = 0; k < g.n_t; ++k) knots_t[k] = g.time(k);

  for (const auto& id : ids) {
    const auto it = loc.find(id);
    if (it == loc.end()) throw InputError("well '" + id + "' has no entry in the locations file");
    const auto& l = it->second;
    if (l.inline_index >= g.n_inline || l.crossline_index >= g.n_crossline)
      throw InputError("well '" + id + "' at (" + std::to_string(l.inline_index) + ", " +
                       std::to_string(l.crossline_index) + ") lies outside the cube");
    std::vector<CubicSpline> traces;
    for (const auto& a : cube.attributes) {
      std::vector<double> y(g.n_t);
      for (std::size_t k = 0; k < g.n_t; ++k) {
        y[k] = a.at(l.inline_index, l.crossline_index, k);
        if (std::isnan(y[k]))
          throw InputError("attribute '" + a.name + "' has null samples on the trace of well '" + id + "'");
      }
      try {
        traces.emplace_back(knots_t, y);
      } catch (const ParameterError& e) {
        throw InputError(std::string("cannot resample trace: ") + e.what());
      }
    }
    for (const auto& row : logs.samples) {
      if (row.well_id != id) continue;
      if (!row.time_ms) throw InputError("well '" + id + "' has a row without time_ms");
      const double t = *row.time_ms;
      if (!(t >= knots_t.front() && t <= knots_t.back())) {
        ++s.dropped_outside_span;
        continue;
      }
      Sample m;
      m.well_id = id;
      m.time_ms = t;
      m.target = row.target;
      m.predictors.reserve(out.attribute_names.size());
      for (const auto& tr : traces) m.predictors.push_back(tr(t));
      m.predictors.insert(m.predictors.end(), row.predictors.begin(), row.predictors.end());
      out.samples.push_back(std::move(m));
    }
  }
  s.rows_out = out.size();
  if (summary) *summary = s;
  return out;
}

}  // namespace sandfrac

#endif  // SANDFRAC_PREP_HPP
