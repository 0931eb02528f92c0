#ifndef SANDFRAC_FEATURE_SELECTION_HPP
#define SANDFRAC_FEATURE_SELECTION_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "sandfrac/dataset.hpp"
#include "sandfrac/error.hpp"
#include "sandfrac/mlp.hpp"

namespace sandfrac {

struct SelectionConfig {
  std::size_t n_hidden = 10;
  std::size_t epochs = 100;
  double lr = 0.05;
  double split_fraction = 0.7;
  std::uint64_t seed = 1;
};

struct SelectionStage {
  std::size_t stage = 0;  // 1-based
  std::string attribute;
  double cc = 0.0;        // held-out CC of the set after adding `attribute`
};

struct SelectionResult {
  std::vector<std::string> selected;          // in order of addition
  std::vector<SelectionStage> trace;          // accepted stages only
  std::optional<SelectionStage> rejected;     // best augmentation that failed to improve
  bool weak_first_stage = false;              // best single attribute had CC <= 0
};

/// Held-out CC of an MLP trained on `names`; NaN CC counts as -inf.
inline double selection_score(const Split& split, const std::vector<std::string>& names,
                              const SelectionConfig& cfg, std::uint64_t seed) {
  TrainConfig tc;
  tc.epochs = cfg.epochs;
  tc.lr = cfg.lr;
  tc.seed = seed;
  const auto [model, report] =
      mlp_train(select_attributes(split.train, names), select_attributes(split.test, names), cfg.n_hidden, tc);
  const double cc = report.test_metrics.cc;
  return std::isnan(cc) ? -std::numeric_limits<double>::infinity() : cc;
}

/// Sequential forward selection: starting from the empty set, each stage
/// trains one network per remaining candidate (same seed within a stage)
/// and keeps the augmentation with the best held-out CC. Selection stops
/// as soon as the best augmentation fails to raise the CC.
inline SelectionResult sfs(const Dataset& data, const std::vector<std::string>& candidates,
                           const SelectionConfig& cfg = {}) {
  if (candidates.empty()) throw ParameterError("feature selection needs at least one candidate");
  for (const auto& c : candidates)
    if (!data.find_attribute(c)) throw InputError("unknown candidate attribute '" + c + "'");
  const Split split = random_split(data, cfg.split_fraction, cfg.seed);

  SelectionResult result;
  std::vector<std::string> remaining = candidates;
  double current = -std::numeric_limits<double>::infinity();
  for (std::size_t stage = 1; !remaining.empty(); ++stage) {
    const std::uint64_t stage_seed = cfg.seed;
    double best_cc = -std::numeric_limits<double>::infinity();
    std::size_t best = 0;
    for (std::size_t k = 0; k < remaining.size(); ++k) {
      auto names = result.selected;
      names.push_back(remaining[k]);
      const double cc = selection_score(split, names, cfg, stage_seed);
      if (cc > best_cc) {
        best_cc = cc;
        best = k;
      }
    }
    const SelectionStage s{stage, remaining[best], best_cc};
    if (stage > 1 && !(best_cc > current)) {
      result.rejected = s;
      break;
    }
    if (stage == 1 && !(best_cc > 0.0)) {
      result.weak_first_stage = true;
      log::warn("no single attribute yields a positive held-out CC; keeping the best one");
    }
    result.selected.push_back(remaining[best]);
    result.trace.push_back(s);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(best));
    current = best_cc;
  }
  return result;
}

}  // namespace sandfrac

#endif  // SANDFRAC_FEATURE_SELECTION_HPP
