#ifndef SANDFRAC_FIS_BUILDER_HPP
#define SANDFRAC_FIS_BUILDER_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "sandfrac/clustering.hpp"
#include "sandfrac/dataset.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/normalize.hpp"
#include "sandfrac/tsk_model.hpp"

namespace sandfrac {

struct BuildOptions {
  std::size_t rule_cap = 10000;
};

inline constexpr double kWidthFloorFactor = 1e-6;

inline double width_floor(double range) { return kWidthFloorFactor * std::max(range, 1.0); }

/// Fresh model shell: normalization fitted on `train`, no rules yet.
inline TskModel model_shell(const Dataset& train) {
  if (train.empty()) throw ParameterError("cannot build a model from an empty dataset");
  if (train.n_inputs() == 0) throw ParameterError("dataset has no predictor attributes");
  train.validate();
  TskModel model;
  model.n_inputs = train.n_inputs();
  model.attribute_names = train.attribute_names;
  model.mf_banks.resize(model.n_inputs);
  model.input_norm.mean.resize(model.n_inputs);
  model.input_norm.stddev.resize(model.n_inputs);
  for (std::size_t j = 0; j < model.n_inputs; ++j)
    zscore_fit_column(train.column(j), model.input_norm.mean[j], model.input_norm.stddev[j],
                      train.attribute_names[j]);
  const auto t = train.targets();
  model.target_norm = minmax_fit(t);
  return model;
}

namespace detail {

inline std::vector<std::string> grid_labels(std::size_t p) {
  if (p == 2) return {"low", "high"};
  if (p == 3) return {"low", "medium", "high"};
  std::vector<std::string> out;
  for (std::size_t k = 0; k < p; ++k) out.push_back("mf" + std::to_string(k));
  return out;
}

}  // namespace detail

/// Grid partition: p evenly spaced bell MFs per input over the observed
/// normalized range (adjacent MFs cross at 0.5, b = 2) and the full cross
/// product of rules, consequents zero. A constant input gets a single MF.
inline TskModel build_grid(const Dataset& train, std::size_t p, const BuildOptions& opts = {}) {
  if (p < 2) throw ParameterError("grid partition needs p >= 2 MFs per input");
  TskModel model = model_shell(train);
  const std::size_t m = model.n_inputs;

  double n_rules = 1.0;
  for (std::size_t j = 0; j < m; ++j) {
    const auto col = train.column(j);
    const auto [lo_it, hi_it] = std::minmax_element(col.begin(), col.end());
    const double lo = model.input_norm.apply(j, *lo_it);
    const double hi = model.input_norm.apply(j, *hi_it);
    const double range = hi - lo;
    auto& bank = model.mf_banks[j];
    if (!(range > 0.0)) {
      bank.push_back({"constant", {width_floor(0.0), 2.0, lo}});
      continue;
    }
    const auto labels = detail::grid_labels(p);
    const double step = range / static_cast<double>(p - 1);
    const double a = std::max(step / 2.0, width_floor(range));
    for (std::size_t k = 0; k < p; ++k) {
      const double c = k + 1 == p ? hi : lo + step * static_cast<double>(k);
      bank.push_back({labels[k], {a, 2.0, c}});
    }
    n_rules *= static_cast<double>(p);
  }
  if (n_rules > static_cast<double>(opts.rule_cap))
    throw ParameterError("grid partition would create " + std::to_string(n_rules) +
                         " rules (cap " + std::to_string(opts.rule_cap) +
                         "); reduce the number of MFs per input");

  std::vector<std::size_t> idx(m, 0);
  while (true) {
    model.rules.push_back({idx, std::vector<double>(m + 1, 0.0)});
    std::size_t j = m;
    while (j > 0) {
      --j;
      if (++idx[j] < model.mf_banks[j].size()) break;
      idx[j] = 0;
      if (j == 0) {
        validate(model);
        return model;
      }
    }
  }
}

/// Per-dimension min-max scaling of the joint (predictors, target) space
/// onto [0, 1]; clustering runs in this space.
struct JointScaling {
  std::vector<double> lo;
  std::vector<double> hi;

  double range(std::size_t d) const { return hi[d] - lo[d]; }
  double scale(std::size_t d, double v) const {
    return range(d) > 0.0 ? (v - lo[d]) / range(d) : 0.0;
  }
  double unscale(std::size_t d, double s) const { return lo[d] + s * range(d); }
};

inline JointScaling fit_joint_scaling(const Dataset& data) {
  if (data.empty()) throw ParameterError("cannot scale an empty dataset");
  const std::size_t m = data.n_inputs();
  JointScaling js;
  js.lo.assign(m + 1, std::numeric_limits<double>::infinity());
  js.hi.assign(m + 1, -std::numeric_limits<double>::infinity());
  for (const auto& s : data.samples) {
    for (std::size_t j = 0; j < m; ++j) {
      js.lo[j] = std::min(js.lo[j], s.predictors[j]);
      js.hi[j] = std::max(js.hi[j], s.predictors[j]);
    }
    js.lo[m] = std::min(js.lo[m], s.target);
    js.hi[m] = std::max(js.hi[m], s.target);
  }
  return js;
}

/// Rows of (scaled predictors, scaled target).
inline PointMatrix joint_points(const Dataset& data, const JointScaling& js) {
  const std::size_t m = data.n_inputs();
  PointMatrix pts(static_cast<Eigen::Index>(data.size()), static_cast<Eigen::Index>(m + 1));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const auto r = static_cast<Eigen::Index>(i);
    for (std::size_t j = 0; j < m; ++j)
      pts(r, static_cast<Eigen::Index>(j)) = js.scale(j, data.samples[i].predictors[j]);
    pts(r, static_cast<Eigen::Index>(m)) = js.scale(m, data.samples[i].target);
  }
  return pts;
}

/// One rule per cluster center (rows of `centers`, joint scaled space).
/// `widths` gives each rule's per-input MF half-width in the same scaled
/// units (rows = clusters, cols = inputs). MF centers and widths are mapped
/// through the raw units into the model's z-score space; b = 2; the
/// consequent constant starts at the cluster's target coordinate.
inline TskModel build_from_clusters(const Dataset& train, const PointMatrix& centers,
                                    const Eigen::MatrixXd& widths,
                                    const BuildOptions& opts = {}) {
  TskModel model = model_shell(train);
  const std::size_t m = model.n_inputs;
  if (centers.rows() < 1) throw ParameterError("cluster-based build needs at least one center");
  if (static_cast<std::size_t>(centers.cols()) != m + 1)
    throw ParameterError("cluster centers have dimension " + std::to_string(centers.cols()) +
                         ", expected inputs + target = " + std::to_string(m + 1));
  if (widths.rows() != centers.rows() || static_cast<std::size_t>(widths.cols()) != m)
    throw ParameterError("cluster width matrix has the wrong shape");
  if (static_cast<std::size_t>(centers.rows()) > opts.rule_cap)
    throw ParameterError("cluster count exceeds the rule cap");

  const JointScaling js = fit_joint_scaling(train);
  // The target's joint scaling and the model's min-max spec coincide on
  // [0, 1], so a scaled target coordinate is already a normalized output.
  for (Eigen::Index i = 0; i < centers.rows(); ++i) {
    TskRule rule;
    rule.antecedent.resize(m);
    rule.consequent.assign(m + 1, 0.0);
    for (std::size_t j = 0; j < m; ++j) {
      const auto jj = static_cast<Eigen::Index>(j);
      const double sigma = model.input_norm.stddev[j];
      const double raw_center = js.unscale(j, centers(i, jj));
      const double z_center = model.input_norm.apply(j, raw_center);
      const double z_range = js.range(j) / sigma;
      const double a = std::max(widths(i, jj) * js.range(j) / sigma, width_floor(z_range));
      rule.antecedent[j] = model.mf_banks[j].size();
      model.mf_banks[j].push_back({"c" + std::to_string(i), {a, 2.0, z_center}});
    }
    rule.consequent[m] = centers(i, static_cast<Eigen::Index>(m));
    model.rules.push_back(std::move(rule));
  }
  validate(model);
  return model;
}

/// Widths from a neighborhood radius: r_a / sqrt(8) for every cluster and
/// input, the Gaussian spread matching exp(-4 d^2 / r_a^2).
inline TskModel build_from_clusters(const Dataset& train, const PointMatrix& centers,
                                    double radius, const BuildOptions& opts = {}) {
  if (!(radius > 0.0)) throw ParameterError("cluster radius must be positive");
  const Eigen::MatrixXd widths = Eigen::MatrixXd::Constant(
      centers.rows(), static_cast<Eigen::Index>(train.n_inputs()), radius / std::sqrt(8.0));
  return build_from_clusters(train, centers, widths, opts);
}

/// Membership-weighted spread of each FCM cluster along each input, in the
/// scaled space the clustering ran in.
inline Eigen::MatrixXd fcm_spreads(const PointMatrix& points, const ClusterResult& fcm_result,
                                   double m_fuzziness, std::size_t n_inputs) {
  if (!fcm_result.membership) throw ParameterError("FCM spreads need a membership matrix");
  const Eigen::MatrixXd& u = *fcm_result.membership;
  const auto c = fcm_result.centers.rows();
  const auto mi = static_cast<Eigen::Index>(n_inputs);
  Eigen::MatrixXd widths(c, mi);
  for (Eigen::Index i = 0; i < c; ++i) {
    Eigen::VectorXd num = Eigen::VectorXd::Zero(mi);
    double den = 0.0;
    for (Eigen::Index p = 0; p < points.rows(); ++p) {
      const double w = std::pow(u(i, p), m_fuzziness);
      for (Eigen::Index j = 0; j < mi; ++j) {
        const double d = points(p, j) - fcm_result.centers(i, j);
        num(j) += w * d * d;
      }
      den += w;
    }
    for (Eigen::Index j = 0; j < mi; ++j) widths(i, j) = den > 0.0 ? std::sqrt(num(j) / den) : 0.0;
  }
  return widths;
}

/// Model 2: subtractive clustering on the joint scaled space.
inline TskModel build_subtractive(const Dataset& train, const SubtractiveParams& params = {},
                                  const BuildOptions& opts = {}) {
  const auto pts = joint_points(train, fit_joint_scaling(train));
  const auto clusters = subtractive(pts, params);
  return build_from_clusters(train, clusters.centers, params.radius, opts);
}

/// Model 3: fuzzy c-means on the joint scaled space, MF widths from each
/// cluster's fuzzy spread.
inline TskModel build_fcm(const Dataset& train, std::size_t n_clusters, std::uint64_t seed,
                          const FcmOptions& fcm_opts = {}, const BuildOptions& opts = {}) {
  const auto pts = joint_points(train, fit_joint_scaling(train));
  const auto clusters = fcm(pts, n_clusters, seed, fcm_opts);
  const auto widths = fcm_spreads(pts, clusters, fcm_opts.m, train.n_inputs());
  return build_from_clusters(train, clusters.centers, widths, opts);
}

}  // namespace sandfrac

#endif  // SANDFRAC_FIS_BUILDER_HPP
