#ifndef SANDFRAC_TSK_MODEL_HPP
#define SANDFRAC_TSK_MODEL_HPP

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "sandfrac/bell.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/normalize.hpp"

namespace sandfrac {

struct FuzzySet {
  std::string label;  // linguistic label, unique within its input's bank
  BellMf mf;

  friend bool operator==(const FuzzySet&, const FuzzySet&) = default;
};

/// One first-order Sugeno rule. `antecedent[j]` indexes the MF bank of
/// input j; `consequent` holds one coefficient per input followed by the
/// constant term.
struct TskRule {
  std::vector<std::size_t> antecedent;
  std::vector<double> consequent;

  friend bool operator==(const TskRule&, const TskRule&) = default;
};

/// First-order Takagi-Sugeno-Kang fuzzy inference system.
///
/// Membership functions and consequents live in normalized space: inputs
/// are z-scored with `input_norm` and the target is min-max scaled with
/// `target_norm`. infer() takes raw inputs and returns raw target units.
struct TskModel {
  std::size_t n_inputs = 0;
  std::vector<std::string> attribute_names;
  std::vector<std::vector<FuzzySet>> mf_banks;
  std::vector<TskRule> rules;
  ZScoreSpec input_norm;
  MinMaxSpec target_norm;

  std::size_t n_rules() const noexcept { return rules.size(); }
  std::size_t n_consequents() const noexcept { return rules.size() * (n_inputs + 1); }

  const BellMf& mf(std::size_t input, std::size_t rule) const {
    return mf_banks[input][rules[rule].antecedent[input]].mf;
  }

  /// Rule-major stacking: rule 0's (n_inputs + 1) coefficients, then rule 1's...
  std::vector<double> stacked_consequents() const {
    std::vector<double> theta;
    theta.reserve(n_consequents());
    for (const auto& r : rules) theta.insert(theta.end(), r.consequent.begin(), r.consequent.end());
    return theta;
  }

  void set_stacked_consequents(std::span<const double> theta) {
    if (theta.size() != n_consequents())
      throw ParameterError("stacked consequent vector has wrong length");
    std::size_t k = 0;
    for (auto& r : rules)
      for (auto& c : r.consequent) c = theta[k++];
  }

  friend bool operator==(const TskModel&, const TskModel&) = default;
};

/// Throws ParameterError on any broken model invariant.
inline void validate(const TskModel& model) {
  const std::size_t m = model.n_inputs;
  if (m == 0) throw ParameterError("model needs at least one input");
  if (model.mf_banks.size() != m) throw ParameterError("model needs one MF bank per input");
  if (!model.attribute_names.empty() && model.attribute_names.size() != m)
    throw ParameterError("model attribute names do not match input count");
  if (model.rules.empty()) throw ParameterError("model needs at least one rule");
  if (model.input_norm.mean.size() != m || model.input_norm.stddev.size() != m)
    throw ParameterError("model input normalization does not match input count");
  for (double s : model.input_norm.stddev)
    if (!(s > 0.0) || !std::isfinite(s))
      throw ParameterError("model input normalization needs finite sigma > 0");
  if (!model.target_norm.valid()) throw ParameterError("model target normalization is invalid");
  for (std::size_t j = 0; j < m; ++j) {
    if (model.mf_banks[j].empty())
      throw ParameterError("input " + std::to_string(j) + " has an empty MF bank");
    std::set<std::string> labels;
    for (const auto& fs : model.mf_banks[j]) {
      if (!fs.mf.valid())
        throw ParameterError("input " + std::to_string(j) + " has an invalid MF '" +
                             fs.label + "'");
      if (!labels.insert(fs.label).second)
        throw ParameterError("duplicate fuzzy set label '" + fs.label + "' on input " +
                             std::to_string(j));
    }
  }
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    const auto& r = model.rules[i];
    if (r.antecedent.size() != m)
      throw ParameterError("rule " + std::to_string(i) + " antecedent length mismatch");
    if (r.consequent.size() != m + 1)
      throw ParameterError("rule " + std::to_string(i) + " consequent length mismatch");
    for (std::size_t j = 0; j < m; ++j)
      if (r.antecedent[j] >= model.mf_banks[j].size())
        throw ParameterError("rule " + std::to_string(i) + " references a missing MF");
    for (double c : r.consequent)
      if (!std::isfinite(c))
        throw ParameterError("rule " + std::to_string(i) + " has a non-finite consequent");
  }
}

/// Firing strength: product of antecedent membership grades at the
/// normalized input `x_norm`.
inline double fire_rule(const TskModel& model, const TskRule& rule,
                        std::span<const double> x_norm) {
  if (x_norm.size() != model.n_inputs) throw ParameterError("input dimension mismatch");
  double w = 1.0;
  for (std::size_t j = 0; j < model.n_inputs; ++j)
    w *= detail::bell_value(model.mf_banks[j][rule.antecedent[j]].mf, x_norm[j]);
  return w;
}

/// w_i / sum(w). An all-zero vector is a degenerate input.
inline std::vector<double> normalize_firing(std::span<const double> w) {
  double total = 0.0;
  for (double v : w) {
    if (!(v >= 0.0)) throw ParameterError("firing strengths must be non-negative");
    total += v;
  }
  if (!(total > 0.0)) throw NumericError("all firing strengths are zero");
  std::vector<double> out(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) out[i] = w[i] / total;
  return out;
}

/// Per-sample quantities of one forward pass, all in normalized space.
struct ForwardPass {
  std::vector<double> x_norm;
  std::vector<double> firing;      // w_i
  std::vector<double> normalized;  // w̄_i
  double total = 0.0;              // sum of w_i; 0 when degenerate
  bool degenerate = false;         // fell back to the strongest rule
};

/// Layers 1-3 of the adaptive network on an already normalized input.
/// When every product underflows to zero, the rule with the largest
/// log-space firing strength takes the full weight.
inline void forward_normalized(const TskModel& model, std::span<const double> x_norm,
                               ForwardPass& fp) {
  const std::size_t r_count = model.rules.size();
  fp.x_norm.assign(x_norm.begin(), x_norm.end());
  fp.firing.resize(r_count);
  fp.normalized.resize(r_count);
  double total = 0.0;
  for (std::size_t i = 0; i < r_count; ++i) {
    fp.firing[i] = fire_rule(model, model.rules[i], x_norm);
    total += fp.firing[i];
  }
  fp.total = total;
  fp.degenerate = !(total > 0.0);
  if (!fp.degenerate) {
    for (std::size_t i = 0; i < r_count; ++i) fp.normalized[i] = fp.firing[i] / total;
    return;
  }
  std::size_t best = 0;
  double best_log = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < r_count; ++i) {
    double lw = 0.0;
    for (std::size_t j = 0; j < model.n_inputs; ++j)
      lw += detail::bell_log_value(model.mf(j, i), x_norm[j]);
    if (lw > best_log) {
      best_log = lw;
      best = i;
    }
  }
  std::fill(fp.normalized.begin(), fp.normalized.end(), 0.0);
  fp.normalized[best] = 1.0;
}

inline double rule_output(const TskRule& rule, std::span<const double> x_norm) {
  const std::size_t m = x_norm.size();
  double f = rule.consequent[m];
  for (std::size_t j = 0; j < m; ++j) f += rule.consequent[j] * x_norm[j];
  return f;
}

/// Layers 4-5: weighted sum of rule outputs, in normalized target space.
inline double output_normalized(const TskModel& model, const ForwardPass& fp) {
  double y = 0.0;
  for (std::size_t i = 0; i < model.rules.size(); ++i)
    if (fp.normalized[i] != 0.0) y += fp.normalized[i] * rule_output(model.rules[i], fp.x_norm);
  return y;
}

struct InferResult {
  double value = 0.0;             // raw target units
  double value_normalized = 0.0;  // before the inverse min-max map
  bool degenerate = false;
};

inline std::vector<double> normalize_input(const TskModel& model, std::span<const double> x) {
  if (x.size() != model.n_inputs)
    throw ParameterError("input has " + std::to_string(x.size()) + " components, model expects " +
                         std::to_string(model.n_inputs));
  return model.input_norm.apply(x);
}

inline InferResult infer_detail(const TskModel& model, std::span<const double> x) {
  ForwardPass fp;
  forward_normalized(model, normalize_input(model, x), fp);
  InferResult r;
  r.value_normalized = output_normalized(model, fp);
  r.value = model.target_norm.invert(r.value_normalized);
  r.degenerate = fp.degenerate;
  return r;
}

/// Model output for a raw input vector, in raw target units.
inline double infer(const TskModel& model, std::span<const double> x) {
  return infer_detail(model, x).value;
}

/// Row of the linear system in the stacked consequents: blocks
/// w̄_i * (x_norm, 1) in rule order, so that row . theta equals the
/// normalized-space output.
inline std::vector<double> design_row(const TskModel& model, std::span<const double> x) {
  ForwardPass fp;
  forward_normalized(model, normalize_input(model, x), fp);
  const std::size_t m = model.n_inputs;
  std::vector<double> row(model.n_consequents());
  for (std::size_t i = 0; i < model.rules.size(); ++i) {
    double* block = row.data() + i * (m + 1);
    for (std::size_t j = 0; j < m; ++j) block[j] = fp.normalized[i] * fp.x_norm[j];
    block[m] = fp.normalized[i];
  }
  return row;
}

}  // namespace sandfrac

#endif  // SANDFRAC_TSK_MODEL_HPP
