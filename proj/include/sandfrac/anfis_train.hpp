#ifndef SANDFRAC_ANFIS_TRAIN_HPP
#define SANDFRAC_ANFIS_TRAIN_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "sandfrac/dataset.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/metrics.hpp"
#include "sandfrac/tsk_model.hpp"

namespace sandfrac {

struct TrainConfig {
  std::size_t epochs = 50;
  double lr = 0.01;          // initial step length
  bool adapt_lr = true;      // halve on SSE increase, x1.1 after two decreases
  std::uint64_t seed = 1;
  double split_fraction = 0.7;
  std::size_t rule_cap = 10000;
  std::size_t patience = 0;  // stop after this many epochs without a new best; 0 = off

  void validate(bool allow_zero_epochs = false) const {
    if (epochs < 1 && !allow_zero_epochs) throw ParameterError("epochs must be >= 1");
    if (!(lr > 0.0) && !(lr == 0.0)) throw ParameterError("learning rate must be >= 0");
    if (!(split_fraction > 0.0 && split_fraction < 1.0))
      throw ParameterError("split fraction must lie in (0, 1)");
  }
};

struct EpochRecord {
  std::size_t epoch = 0;
  double train_rmse = 0.0;
  double test_rmse = 0.0;
};

struct TrainDiagnostics {
  std::size_t degenerate_rows = 0;       // rows with all-zero firing, summed over epochs
  std::size_t skipped_gradients = 0;     // non-finite gradient components
  std::size_t ridge_solves = 0;
};

struct TrainReport {
  std::vector<EpochRecord> epochs;
  long best_epoch = -1;
  Metrics train_metrics;
  Metrics test_metrics;
  TrainDiagnostics diagnostics;
};

/// Step-length heuristic shared by ANFIS and the MLP baseline.
class StepSize {
 public:
  StepSize(double lr, bool adapt) : lr_(lr), adapt_(adapt) {}

  double value() const noexcept { return lr_; }

  void observe(double sse) {
    if (adapt_ && has_prev_) {
      if (sse > prev_) {
        lr_ *= 0.5;
        decreases_ = 0;
      } else if (sse < prev_ && ++decreases_ >= 2) {
        lr_ *= 1.1;
        decreases_ = 0;
      }
    }
    prev_ = sse;
    has_prev_ = true;
  }

 private:
  double lr_;
  bool adapt_;
  double prev_ = 0.0;
  bool has_prev_ = false;
  int decreases_ = 0;
};

/// Dataset mapped into a model's normalized space.
struct NormalizedSet {
  Eigen::MatrixXd x;       // n x m, z-scored predictors
  Eigen::VectorXd t;       // min-max scaled target
  std::vector<double> t_raw;

  Eigen::Index rows() const noexcept { return x.rows(); }
};

inline NormalizedSet normalize_set(const ZScoreSpec& input_norm, const MinMaxSpec& target_norm,
                                   const Dataset& data) {
  data.validate();
  if (data.n_inputs() != input_norm.size())
    throw InputError("dataset has " + std::to_string(data.n_inputs()) +
                     " attributes, model expects " + std::to_string(input_norm.size()));
  NormalizedSet ns;
  const auto n = static_cast<Eigen::Index>(data.size());
  const auto m = static_cast<Eigen::Index>(data.n_inputs());
  ns.x.resize(n, m);
  ns.t.resize(n);
  ns.t_raw = data.targets();
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& s = data.samples[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < m; ++j)
      ns.x(i, j) = input_norm.apply(static_cast<std::size_t>(j), s.predictors[static_cast<std::size_t>(j)]);
    ns.t(i) = target_norm.apply(s.target);
  }
  return ns;
}

inline NormalizedSet normalize_set(const TskModel& model, const Dataset& data) {
  return normalize_set(model.input_norm, model.target_norm, data);
}

namespace detail {

inline std::span<const double> row_span(const Eigen::MatrixXd& x, Eigen::Index i,
                                        std::vector<double>& buf) {
  buf.resize(static_cast<std::size_t>(x.cols()));
  for (Eigen::Index j = 0; j < x.cols(); ++j) buf[static_cast<std::size_t>(j)] = x(i, j);
  return buf;
}

}  // namespace detail

/// Stacked design rows for every sample (n x n_rules * (m + 1)).
inline Eigen::MatrixXd design_matrix(const TskModel& model, const NormalizedSet& set,
                                     std::size_t* degenerate = nullptr) {
  const std::size_t m = model.n_inputs;
  Eigen::MatrixXd a(set.rows(), static_cast<Eigen::Index>(model.n_consequents()));
  ForwardPass fp;
  std::vector<double> buf;
  for (Eigen::Index r = 0; r < set.rows(); ++r) {
    forward_normalized(model, detail::row_span(set.x, r, buf), fp);
    if (fp.degenerate && degenerate) ++*degenerate;
    for (std::size_t i = 0; i < model.rules.size(); ++i) {
      const auto base = static_cast<Eigen::Index>(i * (m + 1));
      for (std::size_t j = 0; j < m; ++j)
        a(r, base + static_cast<Eigen::Index>(j)) = fp.normalized[i] * fp.x_norm[j];
      a(r, base + static_cast<Eigen::Index>(m)) = fp.normalized[i];
    }
  }
  return a;
}

/// Normalized-space predictions.
inline Eigen::VectorXd predict_normalized(const TskModel& model, const NormalizedSet& set) {
  Eigen::VectorXd y(set.rows());
  ForwardPass fp;
  std::vector<double> buf;
  for (Eigen::Index r = 0; r < set.rows(); ++r) {
    forward_normalized(model, detail::row_span(set.x, r, buf), fp);
    y(r) = output_normalized(model, fp);
  }
  return y;
}

inline std::vector<double> predict_raw(const TskModel& model, const NormalizedSet& set) {
  const Eigen::VectorXd y = predict_normalized(model, set);
  std::vector<double> out(static_cast<std::size_t>(y.size()));
  for (Eigen::Index i = 0; i < y.size(); ++i)
    out[static_cast<std::size_t>(i)] = model.target_norm.invert(y(i));
  return out;
}

/// Solve min |A theta - t|^2 through the normal equations with a complete
/// orthogonal decomposition. When the system is underdetermined or its
/// condition estimate exceeds 1e12, a ridge of 1e-8 * trace / n_unknowns
/// is added.
inline Eigen::VectorXd solve_least_squares(const Eigen::MatrixXd& a, const Eigen::VectorXd& t,
                                           bool* used_ridge = nullptr) {
  const Eigen::Index unknowns = a.cols();
  Eigen::MatrixXd g = a.transpose() * a;
  const Eigen::VectorXd h = a.transpose() * t;
  bool ridge = false;
  if (a.rows() < unknowns) {
    log::warn("fewer training rows (" + std::to_string(a.rows()) + ") than consequent unknowns (" +
              std::to_string(unknowns) + "); using a ridge-regularized solve");
    ridge = true;
  } else {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(g, Eigen::EigenvaluesOnly);
    const double lmax = eig.eigenvalues().maxCoeff();
    const double lmin = eig.eigenvalues().minCoeff();
    ridge = !(lmin > 0.0) || lmax / lmin > 1e12;
  }
  if (ridge) {
    const double trace = g.trace();
    const double lambda = 1e-8 * (trace > 0.0 ? trace : 1.0) / static_cast<double>(unknowns);
    g.diagonal().array() += lambda;
  }
  if (used_ridge) *used_ridge = ridge;
  return g.completeOrthogonalDecomposition().solve(h);
}

/// Least-squares estimate of all consequents for fixed premise parameters.
inline TskModel lse_consequents(const TskModel& model, const NormalizedSet& train,
                                TrainDiagnostics* diag = nullptr) {
  std::size_t degenerate = 0;
  const Eigen::MatrixXd a = design_matrix(model, train, &degenerate);
  bool ridge = false;
  const Eigen::VectorXd theta = solve_least_squares(a, train.t, &ridge);
  if (diag) {
    diag->degenerate_rows += degenerate;
    diag->ridge_solves += ridge ? 1 : 0;
  }
  TskModel out = model;
  out.set_stacked_consequents(std::span<const double>(theta.data(), static_cast<std::size_t>(theta.size())));
  return out;
}

inline TskModel lse_consequents(const TskModel& model, const Dataset& train) {
  return lse_consequents(model, normalize_set(model, train));
}

/// Premise parameters flattened as (a, b, c) per MF, inputs in order and
/// MFs in bank order.
inline std::vector<double> premise_parameters(const TskModel& model) {
  std::vector<double> p;
  for (const auto& bank : model.mf_banks)
    for (const auto& fs : bank) p.insert(p.end(), {fs.mf.a, fs.mf.b, fs.mf.c});
  return p;
}

inline void set_premise_parameters(TskModel& model, std::span<const double> p) {
  std::size_t k = 0;
  for (auto& bank : model.mf_banks)
    for (auto& fs : bank) {
      if (k + 3 > p.size()) throw ParameterError("premise parameter vector too short");
      fs.mf.a = p[k];
      fs.mf.b = p[k + 1];
      fs.mf.c = p[k + 2];
      k += 3;
    }
  if (k != p.size()) throw ParameterError("premise parameter vector has wrong length");
}

struct PremiseGradient {
  std::vector<double> grad;  // d SSE / d premise, layout of premise_parameters()
  double sse = 0.0;          // normalized-space SSE at the current parameters
  std::size_t degenerate_rows = 0;
};

/// Analytic gradient of the batch SSE (normalized space) with respect to
/// every (a, b, c), chained through firing, normalization and the weighted
/// sum. Rows with all-zero firing contribute nothing.
inline PremiseGradient premise_gradient(const TskModel& model, const NormalizedSet& train) {
  const std::size_t m = model.n_inputs;
  const std::size_t r_count = model.rules.size();
  std::vector<std::size_t> offset(m, 0);
  std::size_t total = 0;
  for (std::size_t j = 0; j < m; ++j) {
    offset[j] = total;
    total += 3 * model.mf_banks[j].size();
  }
  PremiseGradient pg;
  pg.grad.assign(total, 0.0);

  std::vector<double> x(m), mu(m * r_count), f(r_count), w(r_count);
  for (Eigen::Index row = 0; row < train.rows(); ++row) {
    for (std::size_t j = 0; j < m; ++j) x[j] = train.x(row, static_cast<Eigen::Index>(j));
    double s = 0.0, num = 0.0;
    for (std::size_t i = 0; i < r_count; ++i) {
      double wi = 1.0;
      for (std::size_t j = 0; j < m; ++j) {
        mu[i * m + j] = detail::bell_value(model.mf(j, i), x[j]);
        wi *= mu[i * m + j];
      }
      w[i] = wi;
      f[i] = rule_output(model.rules[i], x);
      s += wi;
      num += wi * f[i];
    }
    const double target = train.t(row);
    if (!(s > 0.0)) {
      ++pg.degenerate_rows;
      ForwardPass fp;
      forward_normalized(model, x, fp);
      const double y = output_normalized(model, fp);
      pg.sse += (y - target) * (y - target);
      continue;
    }
    const double y = num / s;
    const double err = y - target;
    pg.sse += err * err;
    for (std::size_t i = 0; i < r_count; ++i) {
      const double dy_dw = (f[i] - y) / s;
      if (dy_dw == 0.0) continue;
      for (std::size_t j = 0; j < m; ++j) {
        double others = 1.0;
        for (std::size_t l = 0; l < m; ++l)
          if (l != j) others *= mu[i * m + l];
        if (others == 0.0) continue;
        const std::size_t k = model.rules[i].antecedent[j];
        const BellGrad g = detail::bell_gradient(model.mf_banks[j][k].mf, x[j]);
        const double coef = 2.0 * err * dy_dw * others;
        double* out = pg.grad.data() + offset[j] + 3 * k;
        out[0] += coef * g.da;
        out[1] += coef * g.db;
        out[2] += coef * g.dc;
      }
    }
  }
  return pg;
}

inline constexpr double kMinBellSlope = 0.1;
inline constexpr double kMaxBellSlope = 10.0;

/// One batch gradient-descent update of the premise parameters, moving a
/// distance `lr` along the negative normalized gradient. Afterwards
/// a >= width floor and b in [0.1, 10]. Non-finite gradient components are
/// skipped and counted.
inline TskModel premise_step(const TskModel& model, const NormalizedSet& train, double lr,
                             TrainDiagnostics* diag = nullptr) {
  if (lr == 0.0) return model;
  const PremiseGradient pg = premise_gradient(model, train);
  double norm2 = 0.0;
  std::size_t skipped = 0;
  for (double g : pg.grad) {
    if (std::isfinite(g))
      norm2 += g * g;
    else
      ++skipped;
  }
  if (diag) {
    diag->skipped_gradients += skipped;
    diag->degenerate_rows += pg.degenerate_rows;
  }
  if (!(norm2 > 0.0) || !std::isfinite(norm2)) return model;
  const double scale = lr / std::sqrt(norm2);

  TskModel out = model;
  std::vector<double> p = premise_parameters(model);
  for (std::size_t k = 0; k < p.size(); ++k)
    if (std::isfinite(pg.grad[k])) p[k] -= scale * pg.grad[k];
  set_premise_parameters(out, p);
  for (std::size_t j = 0; j < out.n_inputs; ++j) {
    for (auto& fs : out.mf_banks[j]) {
      fs.mf.a = std::max(fs.mf.a, 1e-6);
      fs.mf.b = std::clamp(fs.mf.b, kMinBellSlope, kMaxBellSlope);
    }
  }
  return out;
}

inline TskModel premise_step(const TskModel& model, const Dataset& train, double lr) {
  return premise_step(model, normalize_set(model, train), lr);
}

/// Hybrid learning: each epoch solves the consequents by least squares,
/// records train/test RMSE in raw target units, then takes one gradient
/// step on the premise parameters. Returns the snapshot with the lowest
/// test RMSE (train RMSE if the test set is empty).
inline std::pair<TskModel, TrainReport> train(const TskModel& initial, const Dataset& train_set,
                                              const Dataset& test_set, const TrainConfig& config) {
  config.validate();
  validate(initial);
  const NormalizedSet tr = normalize_set(initial, train_set);
  const bool has_test = !test_set.empty();
  const NormalizedSet te = has_test ? normalize_set(initial, test_set) : NormalizedSet{};
  if (tr.rows() == 0) throw ParameterError("training set is empty");

  TrainReport report;
  TskModel model = initial;
  TskModel best = initial;
  double best_rmse = std::numeric_limits<double>::infinity();
  StepSize step(config.lr, config.adapt_lr);

  for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
    model = lse_consequents(model, tr, &report.diagnostics);
    const auto train_pred = predict_raw(model, tr);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_rmse = rmse(train_pred, tr.t_raw);
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
    if (epoch + 1 == config.epochs) break;

    double sse = 0.0;
    for (std::size_t i = 0; i < train_pred.size(); ++i) {
      const double e = model.target_norm.apply(train_pred[i]) - tr.t(static_cast<Eigen::Index>(i));
      sse += e * e;
    }
    step.observe(sse);
    model = premise_step(model, tr, step.value(), &report.diagnostics);
  }
  if (report.best_epoch < 0) throw NumericError("training produced no finite RMSE");

  report.train_metrics = metrics_lenient(predict_raw(best, tr), tr.t_raw);
  if (has_test) report.test_metrics = metrics_lenient(predict_raw(best, te), te.t_raw);
  return {best, report};
}

}  // namespace sandfrac

#endif  // SANDFRAC_ANFIS_TRAIN_HPP
