#ifndef SANDFRAC_DATASET_HPP
#define SANDFRAC_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sandfrac/error.hpp"
#include "sandfrac/rng.hpp"

namespace sandfrac {

struct Sample {
  std::vector<double> predictors;
  double target = 0.0;
  std::string well_id;
  std::optional<double> time_ms;

  friend bool operator==(const Sample&, const Sample&) = default;
};

/// Ordered rows of predictor vectors with a scalar target.
struct Dataset {
  std::vector<std::string> attribute_names;
  std::vector<Sample> samples;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
  std::size_t n_inputs() const noexcept { return attribute_names.size(); }

  std::vector<double> targets() const {
    std::vector<double> t(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) t[i] = samples[i].target;
    return t;
  }

  std::vector<double> column(std::size_t j) const {
    std::vector<double> c(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) c[i] = samples[i].predictors[j];
    return c;
  }

  std::vector<std::vector<double>> predictor_rows() const {
    std::vector<std::vector<double>> rows;
    rows.reserve(samples.size());
    for (const auto& s : samples) rows.push_back(s.predictors);
    return rows;
  }

  std::optional<std::size_t> find_attribute(const std::string& name) const {
    const auto it = std::find(attribute_names.begin(), attribute_names.end(), name);
    if (it == attribute_names.end()) return std::nullopt;
    return static_cast<std::size_t>(it - attribute_names.begin());
  }

  /// Throws InputError if rows are ragged or contain non-finite values.
  void validate() const {
    for (std::size_t i = 0; i < samples.size(); ++i) {
      const auto& s = samples[i];
      if (s.predictors.size() != attribute_names.size())
        throw InputError("row " + std::to_string(i) + " has " +
                         std::to_string(s.predictors.size()) + " predictors, expected " +
                         std::to_string(attribute_names.size()));
      if (!std::isfinite(s.target))
        throw InputError("row " + std::to_string(i) + " has a non-finite target");
      for (double v : s.predictors)
        if (!std::isfinite(v))
          throw InputError("row " + std::to_string(i) + " has a non-finite predictor");
    }
  }
};

/// Restrict a dataset to the named attributes, in the given order.
inline Dataset select_attributes(const Dataset& data,
                                 const std::vector<std::string>& names) {
  std::vector<std::size_t> idx;
  for (const auto& n : names) {
    auto j = data.find_attribute(n);
    if (!j) throw InputError("unknown attribute '" + n + "'");
    idx.push_back(*j);
  }
  Dataset out;
  out.attribute_names = names;
  out.samples.reserve(data.size());
  for (const auto& s : data.samples) {
    Sample r = s;
    r.predictors.resize(idx.size());
    for (std::size_t k = 0; k < idx.size(); ++k) r.predictors[k] = s.predictors[idx[k]];
    out.samples.push_back(std::move(r));
  }
  return out;
}

/// Distinct well ids in order of first appearance.
inline std::vector<std::string> well_ids(const Dataset& data) {
  std::vector<std::string> ids;
  for (const auto& s : data.samples)
    if (std::find(ids.begin(), ids.end(), s.well_id) == ids.end()) ids.push_back(s.well_id);
  return ids;
}

struct Split {
  Dataset train;
  Dataset test;
};

/// Seeded random partition: floor(fraction * n) rows to train, the rest to
/// test. Row order inside each half follows the shuffle.
inline Split random_split(const Dataset& data, double fraction, std::uint64_t seed) {
  if (!(fraction > 0.0 && fraction < 1.0))
    throw ParameterError("split fraction must lie in (0, 1)");
  if (data.size() < 2) throw ParameterError("random split needs at least two rows");
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  // The epsilon keeps e.g. 0.7 * 10 from flooring to 6.
  auto n_train = static_cast<std::size_t>(
      std::floor(fraction * static_cast<double>(data.size()) + 1e-9));
  n_train = std::clamp<std::size_t>(n_train, 1, data.size() - 1);
  Split out;
  out.train.attribute_names = data.attribute_names;
  out.test.attribute_names = data.attribute_names;
  out.train.samples.reserve(n_train);
  out.test.samples.reserve(data.size() - n_train);
  for (std::size_t k = 0; k < order.size(); ++k)
    (k < n_train ? out.train : out.test).samples.push_back(data.samples[order[k]]);
  return out;
}

}  // namespace sandfrac

#endif  // SANDFRAC_DATASET_HPP
