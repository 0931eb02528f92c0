#ifndef SANDFRAC_NORMALIZE_HPP
#define SANDFRAC_NORMALIZE_HPP

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "sandfrac/error.hpp"

namespace sandfrac {

/// Per-attribute z-score transform: (x - mean) / stddev. The standard
/// deviation is the population one.
struct ZScoreSpec {
  std::vector<double> mean;
  std::vector<double> stddev;

  std::size_t size() const noexcept { return mean.size(); }

  double apply(std::size_t j, double x) const { return (x - mean[j]) / stddev[j]; }
  double invert(std::size_t j, double z) const { return z * stddev[j] + mean[j]; }

  std::vector<double> apply(std::span<const double> x) const {
    check_dim(x.size());
    std::vector<double> out(x.size());
    for (std::size_t j = 0; j < x.size(); ++j) out[j] = apply(j, x[j]);
    return out;
  }

  std::vector<double> invert(std::span<const double> z) const {
    check_dim(z.size());
    std::vector<double> out(z.size());
    for (std::size_t j = 0; j < z.size(); ++j) out[j] = invert(j, z[j]);
    return out;
  }

  void check_dim(std::size_t n) const {
    if (n != mean.size())
      throw ParameterError("z-score spec has " + std::to_string(mean.size()) +
                           " attributes, got " + std::to_string(n));
  }

  friend bool operator==(const ZScoreSpec&, const ZScoreSpec&) = default;
};

/// Affine map of [min, max] onto [new_min, new_max].
struct MinMaxSpec {
  double min = 0.0;
  double max = 1.0;
  double new_min = 0.0;
  double new_max = 1.0;

  double apply(double x) const {
    return (x - min) / (max - min) * (new_max - new_min) + new_min;
  }

  double invert(double y) const {
    return (y - new_min) / (new_max - new_min) * (max - min) + min;
  }

  bool valid() const noexcept {
    return std::isfinite(min) && std::isfinite(max) && std::isfinite(new_min) &&
           std::isfinite(new_max) && max > min && new_max > new_min;
  }

  friend bool operator==(const MinMaxSpec&, const MinMaxSpec&) = default;
};

/// Fit mean and population standard deviation of one column. A constant
/// column gets sigma = 1e-12 * max(|mean|, 1) and a warning.
inline void zscore_fit_column(std::span<const double> column, double& mean,
                              double& stddev, const std::string& name = {}) {
  if (column.empty()) throw ParameterError("cannot fit z-score on an empty column");
  double sum = 0.0;
  for (double v : column) sum += v;
  mean = sum / static_cast<double>(column.size());
  // Second pass removes the rounding left in the naive mean, so the fitted
  // set centers to ~1 ulp even when |mean| >> sigma.
  double resid = 0.0;
  for (double v : column) resid += v - mean;
  mean += resid / static_cast<double>(column.size());
  double ss = 0.0;
  for (double v : column) ss += (v - mean) * (v - mean);
  stddev = std::sqrt(ss / static_cast<double>(column.size()));
  if (!(stddev > 0.0)) {
    stddev = 1e-12 * std::max(std::abs(mean), 1.0);
    log::warn("constant column" + (name.empty() ? std::string{} : " '" + name + "'") +
              " in z-score fit; using sigma floor");
  }
}

/// Fit on a row-major table of `rows` vectors of equal length.
inline ZScoreSpec zscore_fit(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw ParameterError("cannot fit z-score on zero rows");
  const std::size_t m = rows.front().size();
  ZScoreSpec spec;
  spec.mean.resize(m);
  spec.stddev.resize(m);
  std::vector<double> column(rows.size());
  for (std::size_t j = 0; j < m; ++j) {
    for (std::size_t i = 0; i < rows.size(); ++i) column[i] = rows[i].at(j);
    zscore_fit_column(column, spec.mean[j], spec.stddev[j]);
  }
  return spec;
}

inline std::vector<double> zscore_apply(const ZScoreSpec& spec,
                                        std::span<const double> x) {
  return spec.apply(x);
}

inline std::vector<double> zscore_invert(const ZScoreSpec& spec,
                                         std::span<const double> z) {
  return spec.invert(z);
}

inline MinMaxSpec minmax_fit(std::span<const double> values, double new_min = 0.0,
                             double new_max = 1.0) {
  if (values.empty()) throw ParameterError("cannot fit min-max on zero values");
  if (!(new_max > new_min))
    throw ParameterError("min-max target interval must satisfy new_max > new_min");
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  if (!(*hi > *lo))
    throw NumericError("min-max normalization needs a non-zero range (target must vary)");
  return {*lo, *hi, new_min, new_max};
}

inline double minmax_apply(const MinMaxSpec& spec, double x) { return spec.apply(x); }
inline double minmax_invert(const MinMaxSpec& spec, double y) { return spec.invert(y); }

}  // namespace sandfrac

#endif  // SANDFRAC_NORMALIZE_HPP
