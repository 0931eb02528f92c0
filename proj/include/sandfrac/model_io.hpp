#ifndef SANDFRAC_MODEL_IO_HPP
#define SANDFRAC_MODEL_IO_HPP

#include <fstream>
#include <sstream>
#include <string>
#include <variant>

#include <json.hpp>

#include "sandfrac/error.hpp"
#include "sandfrac/mlp.hpp"
#include "sandfrac/tsk_model.hpp"

// Model files are single JSON documents. Doubles are written in nlohmann's
// shortest round-trip form, so every parameter reloads bit-exactly.

namespace sandfrac {

inline constexpr const char* kTskSchema = "sandfrac.tsk";
inline constexpr const char* kMlpSchema = "sandfrac.mlp";
inline constexpr int kModelFormatVersion = 1;

namespace detail {

using nlohmann::json;

inline json norm_to_json(const ZScoreSpec& z) { return {{"mean", z.mean}, {"std", z.stddev}}; }

inline json norm_to_json(const MinMaxSpec& s) {
  return {{"min", s.min}, {"max", s.max}, {"new_min", s.new_min}, {"new_max", s.new_max}};
}

inline ZScoreSpec zscore_from_json(const json& j) {
  return {j.at("mean").get<std::vector<double>>(), j.at("std").get<std::vector<double>>()};
}

inline MinMaxSpec minmax_from_json(const json& j) {
  return {j.at("min").get<double>(), j.at("max").get<double>(), j.at("new_min").get<double>(),
          j.at("new_max").get<double>()};
}

template <class F>
auto parse_guard(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

}  // namespace detail

inline nlohmann::json to_json(const TskModel& model) {
  using detail::json;
  json banks = json::array();
  for (const auto& bank : model.mf_banks) {
    json b = json::array();
    for (const auto& fs : bank) b.push_back({{"label", fs.label}, {"a", fs.mf.a}, {"b", fs.mf.b}, {"c", fs.mf.c}});
    banks.push_back(std::move(b));
  }
  json rules = json::array();
  for (const auto& r : model.rules) rules.push_back({{"antecedent", r.antecedent}, {"consequent", r.consequent}});
  return {{"schema", kTskSchema},
          {"version", kModelFormatVersion},
          {"n_inputs", model.n_inputs},
          {"attribute_names", model.attribute_names},
          {"mf_banks", std::move(banks)},
          {"rules", std::move(rules)},
          {"input_norm", detail::norm_to_json(model.input_norm)},
          {"target_norm", detail::norm_to_json(model.target_norm)}};
}

inline TskModel tsk_from_json(const nlohmann::json& j) {
  return detail::parse_guard("TSK model", [&] {
    if (j.value("schema", std::string(kTskSchema)) != kTskSchema)
      throw InputError("model file is not a TSK model");
    if (j.at("version").get<int>() != kModelFormatVersion)
      throw InputError("unsupported model file version");
    TskModel model;
    model.n_inputs = j.at("n_inputs").get<std::size_t>();
    model.attribute_names = j.at("attribute_names").get<std::vector<std::string>>();
    for (const auto& b : j.at("mf_banks")) {
      std::vector<FuzzySet> bank;
      for (const auto& fs : b)
        bank.push_back({fs.at("label").get<std::string>(),
                        {fs.at("a").get<double>(), fs.at("b").get<double>(), fs.at("c").get<double>()}});
      model.mf_banks.push_back(std::move(bank));
    }
    for (const auto& r : j.at("rules"))
      model.rules.push_back({r.at("antecedent").get<std::vector<std::size_t>>(),
                             r.at("consequent").get<std::vector<double>>()});
    model.input_norm = detail::zscore_from_json(j.at("input_norm"));
    model.target_norm = detail::minmax_from_json(j.at("target_norm"));
    try {
      validate(model);
    } catch (const ParameterError& e) {
      throw InputError(std::string("invalid TSK model file: ") + e.what());
    }
    return model;
  });
}

inline nlohmann::json to_json(const MlpModel& model) {
  using detail::json;
  json hw = json::array();
  for (Eigen::Index r = 0; r < model.hidden_weights.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < model.hidden_weights.cols(); ++c) row.push_back(model.hidden_weights(r, c));
    hw.push_back(std::move(row));
  }
  auto vec = [](const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); };
  return {{"schema", kMlpSchema},
          {"version", kModelFormatVersion},
          {"n_inputs", model.n_inputs},
          {"n_hidden", model.n_hidden},
          {"attribute_names", model.attribute_names},
          {"activation", model.activation},
          {"hidden_weights", std::move(hw)},
          {"hidden_bias", vec(model.hidden_bias)},
          {"output_weights", vec(model.output_weights)},
          {"output_bias", model.output_bias},
          {"input_norm", detail::norm_to_json(model.input_norm)},
          {"target_norm", detail::norm_to_json(model.target_norm)}};
}

inline MlpModel mlp_from_json(const nlohmann::json& j) {
  return detail::parse_guard("MLP model", [&] {
    if (j.at("schema").get<std::string>() != kMlpSchema) throw InputError("model file is not an MLP model");
    if (j.at("version").get<int>() != kModelFormatVersion)
      throw InputError("unsupported model file version");
    MlpModel model;
    model.n_inputs = j.at("n_inputs").get<std::size_t>();
    model.n_hidden = j.at("n_hidden").get<std::size_t>();
    model.attribute_names = j.at("attribute_names").get<std::vector<std::string>>();
    model.activation = j.at("activation").get<std::string>();
    const auto h = static_cast<Eigen::Index>(model.n_hidden);
    const auto m = static_cast<Eigen::Index>(model.n_inputs);
    const auto& hw = j.at("hidden_weights");
    if (static_cast<Eigen::Index>(hw.size()) != h) throw InputError("MLP hidden weight rows mismatch");
    model.hidden_weights.resize(h, m);
    for (Eigen::Index r = 0; r < h; ++r) {
      const auto row = hw.at(static_cast<std::size_t>(r)).get<std::vector<double>>();
      if (static_cast<Eigen::Index>(row.size()) != m) throw InputError("MLP hidden weight columns mismatch");
      for (Eigen::Index c = 0; c < m; ++c) model.hidden_weights(r, c) = row[static_cast<std::size_t>(c)];
    }
    auto vec = [&](const char* key) {
      const auto v = j.at(key).get<std::vector<double>>();
      if (static_cast<Eigen::Index>(v.size()) != h) throw InputError(std::string("MLP ") + key + " size mismatch");
      return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), h));
    };
    model.hidden_bias = vec("hidden_bias");
    model.output_weights = vec("output_weights");
    model.output_bias = j.at("output_bias").get<double>();
    model.input_norm = detail::zscore_from_json(j.at("input_norm"));
    model.target_norm = detail::minmax_from_json(j.at("target_norm"));
    try {
      validate(model);
    } catch (const ParameterError& e) {
      throw InputError(std::string("invalid MLP model file: ") + e.what());
    }
    return model;
  });
}

using AnyModel = std::variant<TskModel, MlpModel>;

inline std::string serialize(const TskModel& m) { return to_json(m).dump(2) + "\n"; }
inline std::string serialize(const MlpModel& m) { return to_json(m).dump(2) + "\n"; }
inline std::string serialize(const AnyModel& m) {
  return std::visit([](const auto& x) { return serialize(x); }, m);
}

inline AnyModel deserialize_model(const std::string& text) {
  const auto j = detail::parse_guard("model file", [&] { return nlohmann::json::parse(text); });
  const auto schema = j.value("schema", std::string(kTskSchema));
  if (schema == kTskSchema) return tsk_from_json(j);
  if (schema == kMlpSchema) return mlp_from_json(j);
  throw InputError("unknown model schema '" + schema + "'");
}

inline void save_model(const std::string& path, const AnyModel& model) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot open '" + path + "' for writing");
  out << serialize(model);
  if (!out) throw InputError("failed writing '" + path + "'");
}

inline AnyModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize_model(ss.str());
}

inline const std::vector<std::string>& attribute_names(const AnyModel& m) {
  return std::visit([](const auto& x) -> const std::vector<std::string>& { return x.attribute_names; }, m);
}

inline double predict(const TskModel& m, std::span<const double> x) { return infer(m, x); }
inline double predict(const MlpModel& m, std::span<const double> x) { return mlp_infer(m, x); }
inline double predict(const AnyModel& m, std::span<const double> x) {
  return std::visit([&](const auto& model) { return predict(model, x); }, m);
}

}  // namespace sandfrac

#endif  // SANDFRAC_MODEL_IO_HPP
