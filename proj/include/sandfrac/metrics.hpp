#ifndef SANDFRAC_METRICS_HPP
#define SANDFRAC_METRICS_HPP

#include <cmath>
#include <limits>
#include <span>

#include "sandfrac/error.hpp"

namespace sandfrac {

/// Goodness-of-fit of modeled values X against observations Y.
struct Metrics {
  double cc = std::numeric_limits<double>::quiet_NaN();
  double rmse = std::numeric_limits<double>::quiet_NaN();
  double aem = std::numeric_limits<double>::quiet_NaN();
  double si = std::numeric_limits<double>::quiet_NaN();
};

namespace detail {

inline void check_metric_inputs(std::span<const double> modeled,
                                std::span<const double> observed) {
  if (modeled.size() != observed.size())
    throw InputError("metrics: modeled and observed lengths differ");
  if (modeled.empty()) throw InputError("metrics: empty input");
}

}  // namespace detail

/// Pearson correlation coefficient. Throws NumericError when either
/// argument has zero variance.
inline double correlation(std::span<const double> x, std::span<const double> y) {
  detail::check_metric_inputs(x, y);
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0))
    throw NumericError("correlation undefined: zero variance");
  const double r = sxy / std::sqrt(sxx * syy);
  return std::fmax(-1.0, std::fmin(1.0, r));
}

inline double rmse(std::span<const double> x, std::span<const double> y) {
  detail::check_metric_inputs(x, y);
  double ss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) ss += (x[i] - y[i]) * (x[i] - y[i]);
  return std::sqrt(ss / static_cast<double>(x.size()));
}

inline double absolute_error_mean(std::span<const double> x, std::span<const double> y) {
  detail::check_metric_inputs(x, y);
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] - y[i]);
  return s / static_cast<double>(x.size());
}

/// RMSE divided by the mean observation. Throws NumericError when that mean
/// is zero.
inline double scatter_index(std::span<const double> x, std::span<const double> y) {
  detail::check_metric_inputs(x, y);
  double my = 0.0;
  for (double v : y) my += v;
  my /= static_cast<double>(y.size());
  if (my == 0.0) throw NumericError("scatter index undefined: mean observation is 0");
  return rmse(x, y) / my;
}

/// All four metrics; throws if any is undefined.
inline Metrics metrics(std::span<const double> modeled, std::span<const double> observed) {
  return {correlation(modeled, observed), rmse(modeled, observed),
          absolute_error_mean(modeled, observed), scatter_index(modeled, observed)};
}

/// Like metrics() but undefined components are NaN instead of errors.
inline Metrics metrics_lenient(std::span<const double> modeled,
                               std::span<const double> observed) {
  Metrics m;
  m.rmse = rmse(modeled, observed);
  m.aem = absolute_error_mean(modeled, observed);
  try {
    m.cc = correlation(modeled, observed);
  } catch (const NumericError&) {
  }
  try {
    m.si = scatter_index(modeled, observed);
  } catch (const NumericError&) {
  }
  return m;
}

}  // namespace sandfrac

#endif  // SANDFRAC_METRICS_HPP
