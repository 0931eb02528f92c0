#ifndef SANDFRAC_MLP_HPP
#define SANDFRAC_MLP_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "sandfrac/anfis_train.hpp"
#include "sandfrac/dataset.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/metrics.hpp"
#include "sandfrac/normalize.hpp"
#include "sandfrac/rng.hpp"

namespace sandfrac {

/// Single-hidden-layer feed-forward regressor: tanh hidden units, linear
/// output. Same normalization convention as TskModel.
struct MlpModel {
  std::size_t n_inputs = 0;
  std::size_t n_hidden = 0;
  std::vector<std::string> attribute_names;
  Eigen::MatrixXd hidden_weights;  // n_hidden x n_inputs
  Eigen::VectorXd hidden_bias;     // n_hidden
  Eigen::VectorXd output_weights;  // n_hidden
  double output_bias = 0.0;
  std::string activation = "tanh";
  ZScoreSpec input_norm;
  MinMaxSpec target_norm;

  std::size_t n_parameters() const noexcept { return n_hidden * (n_inputs + 2) + 1; }

  friend bool operator==(const MlpModel& l, const MlpModel& r) {
    return l.n_inputs == r.n_inputs && l.n_hidden == r.n_hidden &&
           l.attribute_names == r.attribute_names && l.hidden_weights == r.hidden_weights &&
           l.hidden_bias == r.hidden_bias && l.output_weights == r.output_weights &&
           l.output_bias == r.output_bias && l.activation == r.activation &&
           l.input_norm == r.input_norm && l.target_norm == r.target_norm;
  }
};

inline void validate(const MlpModel& model) {
  const auto h = static_cast<Eigen::Index>(model.n_hidden);
  const auto m = static_cast<Eigen::Index>(model.n_inputs);
  if (model.n_inputs == 0) throw ParameterError("MLP needs at least one input");
  if (model.hidden_weights.rows() != h || model.hidden_weights.cols() != m ||
      model.hidden_bias.size() != h || model.output_weights.size() != h)
    throw ParameterError("MLP weight shapes do not match layer sizes");
  if (!model.hidden_weights.allFinite() || !model.hidden_bias.allFinite() ||
      !model.output_weights.allFinite() || !std::isfinite(model.output_bias))
    throw ParameterError("MLP has non-finite parameters");
  if (model.activation != "tanh") throw ParameterError("unsupported activation '" + model.activation + "'");
  if (model.input_norm.size() != model.n_inputs)
    throw ParameterError("MLP input normalization does not match input count");
  if (!model.target_norm.valid()) throw ParameterError("MLP target normalization is invalid");
}

/// Flattened parameters: hidden weights row-major, hidden biases, output
/// weights, output bias.
inline std::vector<double> mlp_parameters(const MlpModel& model) {
  std::vector<double> p;
  p.reserve(model.n_parameters());
  for (Eigen::Index r = 0; r < model.hidden_weights.rows(); ++r)
    for (Eigen::Index c = 0; c < model.hidden_weights.cols(); ++c) p.push_back(model.hidden_weights(r, c));
  for (Eigen::Index r = 0; r < model.hidden_bias.size(); ++r) p.push_back(model.hidden_bias(r));
  for (Eigen::Index r = 0; r < model.output_weights.size(); ++r) p.push_back(model.output_weights(r));
  p.push_back(model.output_bias);
  return p;
}

inline void set_mlp_parameters(MlpModel& model, std::span<const double> p) {
  if (p.size() != model.n_parameters()) throw ParameterError("MLP parameter vector has wrong length");
  std::size_t k = 0;
  for (Eigen::Index r = 0; r < model.hidden_weights.rows(); ++r)
    for (Eigen::Index c = 0; c < model.hidden_weights.cols(); ++c) model.hidden_weights(r, c) = p[k++];
  for (Eigen::Index r = 0; r < model.hidden_bias.size(); ++r) model.hidden_bias(r) = p[k++];
  for (Eigen::Index r = 0; r < model.output_weights.size(); ++r) model.output_weights(r) = p[k++];
  model.output_bias = p[k];
}

inline double mlp_forward_normalized(const MlpModel& model, std::span<const double> x_norm) {
  double y = model.output_bias;
  for (Eigen::Index h = 0; h < model.hidden_weights.rows(); ++h) {
    double z = model.hidden_bias(h);
    for (Eigen::Index j = 0; j < model.hidden_weights.cols(); ++j)
      z += model.hidden_weights(h, j) * x_norm[static_cast<std::size_t>(j)];
    y += model.output_weights(h) * std::tanh(z);
  }
  return y;
}

/// Network output for a raw input vector, in raw target units.
inline double mlp_infer(const MlpModel& model, std::span<const double> x) {
  if (x.size() != model.n_inputs)
    throw ParameterError("input has " + std::to_string(x.size()) + " components, MLP expects " +
                         std::to_string(model.n_inputs));
  const auto xn = model.input_norm.apply(x);
  return model.target_norm.invert(mlp_forward_normalized(model, xn));
}

inline std::vector<double> predict_raw(const MlpModel& model, const NormalizedSet& set) {
  std::vector<double> out(static_cast<std::size_t>(set.rows()));
  std::vector<double> buf;
  for (Eigen::Index r = 0; r < set.rows(); ++r)
    out[static_cast<std::size_t>(r)] =
        model.target_norm.invert(mlp_forward_normalized(model, detail::row_span(set.x, r, buf)));
  return out;
}

struct MlpGradient {
  std::vector<double> grad;  // layout of mlp_parameters()
  double sse = 0.0;
};

/// Backpropagated gradient of the normalized-space batch SSE.
inline MlpGradient mlp_gradient(const MlpModel& model, const NormalizedSet& set) {
  const auto hn = static_cast<Eigen::Index>(model.n_hidden);
  const auto m = static_cast<Eigen::Index>(model.n_inputs);
  MlpGradient g;
  g.grad.assign(model.n_parameters(), 0.0);
  double* gw = g.grad.data();
  double* gb = gw + hn * m;
  double* gv = gb + hn;
  double* gc = gv + hn;
  Eigen::VectorXd act(hn);
  for (Eigen::Index r = 0; r < set.rows(); ++r) {
    double y = model.output_bias;
    for (Eigen::Index h = 0; h < hn; ++h) {
      double z = model.hidden_bias(h);
      for (Eigen::Index j = 0; j < m; ++j) z += model.hidden_weights(h, j) * set.x(r, j);
      act(h) = std::tanh(z);
      y += model.output_weights(h) * act(h);
    }
    const double err = y - set.t(r);
    g.sse += err * err;
    const double dy = 2.0 * err;
    *gc += dy;
    for (Eigen::Index h = 0; h < hn; ++h) {
      gv[h] += dy * act(h);
      const double dz = dy * model.output_weights(h) * (1.0 - act(h) * act(h));
      gb[h] += dz;
      for (Eigen::Index j = 0; j < m; ++j) gw[h * m + j] += dz * set.x(r, j);
    }
  }
  return g;
}

/// Normalization fitted on `train`, weights uniform in [-0.5, 0.5].
inline MlpModel mlp_init(const Dataset& train, std::size_t n_hidden, std::uint64_t seed) {
  if (n_hidden < 1) throw ParameterError("MLP needs at least one hidden unit");
  if (train.empty() || train.n_inputs() == 0)
    throw ParameterError("MLP needs a non-empty dataset with predictors");
  train.validate();
  MlpModel model;
  model.n_inputs = train.n_inputs();
  model.n_hidden = n_hidden;
  model.attribute_names = train.attribute_names;
  model.input_norm.mean.resize(model.n_inputs);
  model.input_norm.stddev.resize(model.n_inputs);
  for (std::size_t j = 0; j < model.n_inputs; ++j)
    zscore_fit_column(train.column(j), model.input_norm.mean[j], model.input_norm.stddev[j],
                      train.attribute_names[j]);
  const auto t = train.targets();
  model.target_norm = minmax_fit(t);
  const auto h = static_cast<Eigen::Index>(n_hidden);
  model.hidden_weights.resize(h, static_cast<Eigen::Index>(model.n_inputs));
  model.hidden_bias.resize(h);
  model.output_weights.resize(h);
  // Biases and output weights first, then input columns in order, so a
  // network with an appended input shares every earlier draw.
  Rng rng(seed);
  for (Eigen::Index k = 0; k < h; ++k) model.hidden_bias(k) = rng.uniform(-0.5, 0.5);
  for (Eigen::Index k = 0; k < h; ++k) model.output_weights(k) = rng.uniform(-0.5, 0.5);
  model.output_bias = rng.uniform(-0.5, 0.5);
  for (Eigen::Index j = 0; j < model.hidden_weights.cols(); ++j)
    for (Eigen::Index k = 0; k < h; ++k) model.hidden_weights(k, j) = rng.uniform(-0.5, 0.5);
  return model;
}

/// Batch gradient descent with the shared step-size heuristic; returns the
/// snapshot with the lowest test RMSE. Zero epochs returns the initialized
/// network.
inline std::pair<MlpModel, TrainReport> mlp_train(const Dataset& train_set, const Dataset& test_set,
                                                  std::size_t n_hidden, const TrainConfig& config) {
  config.validate(/*allow_zero_epochs=*/true);
  MlpModel model = mlp_init(train_set, n_hidden, config.seed);
  const NormalizedSet tr = normalize_set(model.input_norm, model.target_norm, train_set);
  const bool has_test = !test_set.empty();
  const NormalizedSet te =
      has_test ? normalize_set(model.input_norm, model.target_norm, test_set) : NormalizedSet{};

  TrainReport report;
  MlpModel best = model;
  double best_rmse = std::numeric_limits<double>::infinity();
  StepSize step(config.lr, config.adapt_lr);
  std::vector<double> params = mlp_parameters(model);
  double initial_sse = -1.0;

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    const MlpGradient g = mlp_gradient(model, tr);
    if (initial_sse < 0.0) initial_sse = g.sse;
    if (!std::isfinite(g.sse) || g.sse > 1e6 * std::max(initial_sse, 1e-300))
      throw NumericError("MLP training diverged at epoch " + std::to_string(epoch));
    step.observe(g.sse);
    double norm2 = 0.0;
    for (double v : g.grad) norm2 += v * v;
    if (norm2 > 0.0 && std::isfinite(norm2)) {
      const double scale = step.value() / std::sqrt(norm2);
      for (std::size_t k = 0; k < params.size(); ++k) params[k] -= scale * g.grad[k];
      set_mlp_parameters(model, params);
    }

    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_rmse = rmse(predict_raw(model, tr), tr.t_raw);
    rec.test_rmse = has_test ? rmse(predict_raw(model, te), te.t_raw)
                             : std::numeric_limits<double>::quiet_NaN();
    report.epochs.push_back(rec);
    const double score = has_test ? rec.test_rmse : rec.train_rmse;
    if (score < best_rmse) {
      best_rmse = score;
      best = model;
      report.best_epoch = static_cast<long>(epoch);
    }
    if (config.patience > 0 && report.best_epoch >= 0 &&
        epoch - static_cast<std::size_t>(report.best_epoch) >= config.patience)
      break;
  }
  report.train_metrics = metrics_lenient(predict_raw(best, tr), tr.t_raw);
  if (has_test) report.test_metrics = metrics_lenient(predict_raw(best, te), te.t_raw);
  return {best, report};
}

}  // namespace sandfrac

#endif  // SANDFRAC_MLP_HPP
