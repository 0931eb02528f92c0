// sandfrac: neuro-fuzzy sand-fraction modeling from seismic attributes.
//
//   sandfrac synth    --out-dir DIR [--seed N] [--noise S] ...
//   sandfrac prep     --wells W.csv --locations L.csv --cube A.sfcube ... --out D.csv
//   sandfrac train    --data D.csv --model grid|subtractive|fcm|ann --out-model M.json --report R.csv
//   sandfrac evaluate --model-file M.json --data D.csv [--per-well]
//   sandfrac volume   --model-file M.json --cube A.sfcube ... --out P.sfcube [--smooth] [--slice K ...]
//   sandfrac select   --data D.csv [--candidates a,b,c] --out trace.csv
//
// Exit codes: 0 ok, 2 input error, 3 configuration error, 4 numeric error.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sandfrac/sandfrac.hpp"

namespace sf = sandfrac;

namespace {

struct SynthArgs {
  sf::SynthConfig cfg;
  std::string out_dir;
};

struct PrepArgs {
  std::string wells, locations, out;
  std::vector<std::string> cubes;
};

struct TrainArgs {
  std::string data, model, out_model, report, metrics_out, train_out, test_out;
  std::vector<std::string> attributes;
  std::size_t p = 3;
  std::size_t clusters = 8;
  double radius = 0.2;
  std::size_t epochs = 0;  // 0 = model default
  double lr = 0.0;         // 0 = model default
  std::size_t hidden = 10;
  std::uint64_t seed = 1;
  double split = 0.7;
  std::size_t rule_cap = 10000;
  std::size_t patience = 0;
};

struct EvaluateArgs {
  std::string model_file, data, out, label;
  bool per_well = false;
};

struct VolumeArgs {
  std::string model_file, out, raw_out, slice_out, overlay_well, wells, locations, overlay_out;
  std::vector<std::string> cubes;
  bool smooth = false;
  long slice = -1;
};

struct SelectArgs {
  std::string data, out;
  std::vector<std::string> candidates;
  sf::SelectionConfig cfg;
};

void print_metrics_table(std::ostream& out, const sf::TrainReport& report) {
  out << "set,cc,rmse,aem,si\n";
  auto row = [&](const char* name, const sf::Metrics& m) {
    out << name << ',' << sf::format_real(m.cc) << ',' << sf::format_real(m.rmse) << ','
        << sf::format_real(m.aem) << ',' << sf::format_real(m.si) << '\n';
  };
  row("train", report.train_metrics);
  row("test", report.test_metrics);
}

int run_synth(const SynthArgs& a) {
  namespace fs = std::filesystem;
  fs::create_directories(a.out_dir);
  const auto out = sf::synthesize(a.cfg);
  const fs::path dir(a.out_dir);
  sf::write_dataset((dir / "wells.csv").string(), out.well_logs);
  sf::write_locations((dir / "locations.csv").string(), out.locations);
  for (const auto& vol : out.cube.attributes) sf::write_cube((dir / (vol.name + ".sfcube")).string(), vol);
  sf::write_cube((dir / "truth.sfcube").string(), out.truth);
  sf::log::info("synth: " + std::to_string(out.locations.size()) + " wells, " +
                std::to_string(out.well_logs.size()) + " log rows, cube " + std::to_string(a.cfg.n_inline) + "x" +
                std::to_string(a.cfg.n_crossline) + "x" + std::to_string(a.cfg.n_t) + " -> " + a.out_dir);
  return 0;
}

int run_prep(const PrepArgs& a) {
  const auto logs = sf::read_dataset(a.wells);
  const auto locations = sf::read_locations(a.locations);
  const auto cube = sf::read_cubes(a.cubes);
  sf::PrepSummary s;
  const auto merged = sf::merge_wells_with_cube(logs, locations, cube, &s);
  sf::write_dataset(a.out, merged);
  sf::log::info("prep: " + std::to_string(s.wells) + " wells, " + std::to_string(s.rows_out) + " of " +
                std::to_string(s.rows_in) + " rows kept, " + std::to_string(s.dropped_outside_span) +
                " dropped outside the seismic time span");
  return 0;
}

int run_train(const TrainArgs& a) {
  auto data = sf::read_dataset(a.data);
  if (!a.attributes.empty()) data = sf::select_attributes(data, a.attributes);
  const auto split = sf::random_split(data, a.split, a.seed);
  if (!a.train_out.empty()) sf::write_dataset(a.train_out, split.train);
  if (!a.test_out.empty()) sf::write_dataset(a.test_out, split.test);

  sf::TrainConfig cfg;
  cfg.seed = a.seed;
  cfg.split_fraction = a.split;
  cfg.rule_cap = a.rule_cap;
  cfg.patience = a.patience;
  const sf::BuildOptions build{a.rule_cap};

  sf::AnyModel model;
  sf::TrainReport report;
  if (a.model == "ann") {
    cfg.epochs = a.epochs ? a.epochs : 500;
    cfg.lr = a.lr > 0.0 ? a.lr : 0.05;
    auto [m, r] = sf::mlp_train(split.train, split.test, a.hidden, cfg);
    model = std::move(m);
    report = std::move(r);
  } else {
    cfg.epochs = a.epochs ? a.epochs : 50;
    cfg.lr = a.lr > 0.0 ? a.lr : 0.01;
    sf::TskModel initial;
    if (a.model == "grid") {
      initial = sf::build_grid(split.train, a.p, build);
    } else if (a.model == "subtractive") {
      sf::SubtractiveParams sp;
      sp.radius = a.radius;
      initial = sf::build_subtractive(split.train, sp, build);
    } else {
      initial = sf::build_fcm(split.train, a.clusters, a.seed, {}, build);
    }
    sf::log::info("train: " + a.model + " model with " + std::to_string(initial.n_rules()) + " rules");
    auto [m, r] = sf::train(initial, split.train, split.test, cfg);
    model = std::move(m);
    report = std::move(r);
    if (report.diagnostics.degenerate_rows)
      sf::log::warn(std::to_string(report.diagnostics.degenerate_rows) + " degenerate-firing rows during training");
  }
  sf::save_model(a.out_model, model);
  if (!a.report.empty()) sf::write_report_csv(a.report, report);
  sf::log::info("train: best epoch " + std::to_string(report.best_epoch) + " of " +
                std::to_string(report.epochs.size()));
  print_metrics_table(std::cout, report);
  if (!a.metrics_out.empty()) {
    std::ofstream out(a.metrics_out);
    if (!out) throw sf::InputError("cannot open '" + a.metrics_out + "' for writing");
    print_metrics_table(out, report);
  }
  return 0;
}

int run_evaluate(const EvaluateArgs& a) {
  const auto model = sf::load_model(a.model_file);
  const auto data = sf::select_attributes(sf::read_dataset(a.data), sf::attribute_names(model));
  const std::string label =
      !a.label.empty() ? a.label : std::filesystem::path(a.model_file).stem().string();

  std::ostringstream os;
  os << "model,well_id,n,cc,rmse,aem,si\n";
  auto emit = [&](const std::string& well, const std::vector<double>& pred, const std::vector<double>& obs) {
    const auto m = sf::metrics_lenient(pred, obs);
    os << label << ',' << well << ',' << pred.size() << ',' << sf::format_real(m.cc) << ','
       << sf::format_real(m.rmse) << ',' << sf::format_real(m.aem) << ',' << sf::format_real(m.si) << '\n';
  };
  std::vector<double> pred, obs;
  for (const auto& s : data.samples) {
    pred.push_back(sf::predict(model, s.predictors));
    obs.push_back(s.target);
  }
  if (data.empty()) throw sf::InputError("evaluation dataset is empty");
  emit("ALL", pred, obs);
  if (a.per_well) {
    for (const auto& id : sf::well_ids(data)) {
      std::vector<double> p, o;
      for (std::size_t i = 0; i < data.size(); ++i)
        if (data.samples[i].well_id == id) {
          p.push_back(pred[i]);
          o.push_back(obs[i]);
        }
      emit(id, p, o);
    }
  }
  if (a.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream out(a.out);
    if (!out) throw sf::InputError("cannot open '" + a.out + "' for writing");
    out << os.str();
  }
  return 0;
}

int run_volume(const VolumeArgs& a) {
  const auto model = sf::load_model(a.model_file);
  const auto cube = sf::read_cubes(a.cubes);
  const auto raw = sf::predict_cube(model, cube);
  sf::log::info("volume: " + std::to_string(raw.geometry.cells()) + " cells, " +
                std::to_string(raw.diagnostics.masked) + " masked, " + std::to_string(raw.diagnostics.clamped) +
                " clamped, " + std::to_string(raw.diagnostics.degenerate) + " degenerate");
  if (!a.raw_out.empty()) sf::write_cube(a.raw_out, sf::to_volume(raw, "sand_fraction"));
  const auto result = a.smooth ? sf::smooth_cube(raw) : raw;
  sf::write_cube(a.out, sf::to_volume(result, "sand_fraction"));

  if (a.slice >= 0) {
    const auto k = static_cast<std::size_t>(a.slice);
    if (a.slice_out.empty()) throw sf::ParameterError("--slice needs --slice-out");
    sf::export_slice(a.slice_out, result, k);
    if (!a.overlay_well.empty()) {
      if (a.wells.empty() || a.locations.empty() || a.overlay_out.empty())
        throw sf::ParameterError("--overlay-well needs --wells, --locations and --overlay-out");
      const auto logs = sf::read_dataset(a.wells);
      sf::WellOverlay ov;
      bool found = false;
      for (const auto& l : sf::read_locations(a.locations))
        if (l.well_id == a.overlay_well) {
          ov.inline_index = l.inline_index;
          ov.crossline_index = l.crossline_index;
          found = true;
        }
      if (!found) throw sf::InputError("well '" + a.overlay_well + "' not in the locations file");
      if (ov.inline_index != k)
        sf::log::warn("overlay well lies on inline " + std::to_string(ov.inline_index) + ", not the exported slice");
      for (const auto& s : logs.samples)
        if (s.well_id == a.overlay_well && s.time_ms) {
          ov.time_ms.push_back(*s.time_ms);
          ov.target.push_back(s.target);
        }
      const auto rows = sf::export_overlay(a.overlay_out, result, ov);
      sf::log::info("volume: overlay of " + std::to_string(rows) + " well samples");
    }
  }
  return 0;
}

int run_select(SelectArgs a) {
  const auto data = sf::read_dataset(a.data);
  if (a.candidates.empty()) a.candidates = data.attribute_names;
  const auto result = sf::sfs(data, a.candidates, a.cfg);
  std::ostringstream os;
  os << "stage,attribute_added,cc\n";
  for (const auto& s : result.trace) os << s.stage << ',' << s.attribute << ',' << sf::format_real(s.cc) << '\n';
  if (result.rejected)
    sf::log::info("select: stopped; best augmentation '" + result.rejected->attribute +
                  "' reached CC " + sf::format_real(result.rejected->cc));
  if (a.out.empty()) {
    std::cout << os.str();
  } else {
    std::ofstream out(a.out);
    if (!out) throw sf::InputError("cannot open '" + a.out + "' for writing");
    out << os.str();
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Neuro-fuzzy sand-fraction modeling from seismic attributes"};
  app.require_subcommand(1);
  bool quiet = false;
  app.add_flag("-q,--quiet", quiet, "Suppress progress and warnings on standard error");

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Generate a synthetic survey, well logs and ground truth");
  c_synth->add_option("--out-dir", synth.out_dir, "Output directory")->required();
  c_synth->add_option("--seed", synth.cfg.seed, "Random seed")->capture_default_str();
  c_synth->add_option("--wells", synth.cfg.n_wells, "Number of wells")->capture_default_str();
  c_synth->add_option("--inlines", synth.cfg.n_inline, "Inline count")->capture_default_str();
  c_synth->add_option("--crosslines", synth.cfg.n_crossline, "Crossline count")->capture_default_str();
  c_synth->add_option("--samples", synth.cfg.n_t, "Time samples per trace")->capture_default_str();
  c_synth->add_option("--t0", synth.cfg.t0, "First sample time (ms)")->capture_default_str();
  c_synth->add_option("--dt", synth.cfg.dt, "Seismic sample interval (ms)")->capture_default_str();
  c_synth->add_option("--well-dt", synth.cfg.well_dt, "Well log sample interval (ms)")->capture_default_str();
  c_synth->add_option("--noise", synth.cfg.noise, "Noise standard deviation")->capture_default_str();

  PrepArgs prep;
  auto* c_prep = app.add_subcommand("prep", "Merge well logs with cube attributes resampled to log times");
  c_prep->add_option("--wells", prep.wells, "Well log CSV (well_id,time_ms,sand_fraction,...)")->required();
  c_prep->add_option("--locations", prep.locations, "Locations CSV (well_id,inline,crossline)")->required();
  c_prep->add_option("--cube", prep.cubes, "SFCUBE1 attribute file (repeatable)")->required();
  c_prep->add_option("--out", prep.out, "Merged dataset CSV")->required();

  TrainArgs tr;
  auto* c_train = app.add_subcommand("train", "Build and train a model");
  c_train->add_option("--data", tr.data, "Dataset CSV")->required();
  c_train->add_option("--model", tr.model, "grid | subtractive | fcm | ann")->required();
  c_train->add_option("--out-model", tr.out_model, "Model JSON output")->required();
  c_train->add_option("--report", tr.report, "Per-epoch RMSE CSV output");
  c_train->add_option("--metrics-out", tr.metrics_out, "Final metrics CSV output");
  c_train->add_option("--train-out", tr.train_out, "Write the training split as a dataset CSV");
  c_train->add_option("--test-out", tr.test_out, "Write the test split as a dataset CSV");
  c_train->add_option("--attributes", tr.attributes, "Predictor subset (default: all)")->delimiter(',');
  c_train->add_option("--p", tr.p, "Grid: MFs per input")->capture_default_str();
  c_train->add_option("--clusters", tr.clusters, "FCM: number of clusters")->capture_default_str();
  c_train->add_option("--radius", tr.radius, "Subtractive: neighborhood radius")->capture_default_str();
  c_train->add_option("--epochs", tr.epochs, "Epochs (default 50 for ANFIS, 500 for ann)");
  c_train->add_option("--lr", tr.lr, "Initial step length (default 0.01 ANFIS, 0.05 ann)");
  c_train->add_option("--hidden", tr.hidden, "ANN hidden units")->capture_default_str();
  c_train->add_option("--seed", tr.seed, "Random seed (split, clustering, weights)")->capture_default_str();
  c_train->add_option("--split", tr.split, "Training fraction")->capture_default_str();
  c_train->add_option("--rule-cap", tr.rule_cap, "Maximum rule count")->capture_default_str();
  c_train->add_option("--patience", tr.patience, "Early-stop patience in epochs (0 = off)")->capture_default_str();

  EvaluateArgs ev;
  auto* c_eval = app.add_subcommand("evaluate", "Compute CC/RMSE/AEM/SI of a model on a dataset");
  c_eval->add_option("--model-file", ev.model_file, "Model JSON")->required();
  c_eval->add_option("--data", ev.data, "Dataset CSV")->required();
  c_eval->add_flag("--per-well", ev.per_well, "Add one row per well");
  c_eval->add_option("--label", ev.label, "Model label for the table (default: file stem)");
  c_eval->add_option("--out", ev.out, "Output CSV (default: stdout)");

  VolumeArgs vol;
  auto* c_vol = app.add_subcommand("volume", "Predict sand fraction over a cube");
  c_vol->add_option("--model-file", vol.model_file, "Model JSON")->required();
  c_vol->add_option("--cube", vol.cubes, "SFCUBE1 attribute file (repeatable)")->required();
  c_vol->add_option("--out", vol.out, "Output property cube (smoothed when --smooth)")->required();
  c_vol->add_option("--raw-out", vol.raw_out, "Also write the unsmoothed prediction");
  c_vol->add_flag("--smooth", vol.smooth, "Apply the 3x5 median filter per inline");
  c_vol->add_option("--slice", vol.slice, "Inline index to export");
  c_vol->add_option("--slice-out", vol.slice_out, "Slice CSV output (rows = time, cols = crossline)");
  c_vol->add_option("--overlay-well", vol.overlay_well, "Well id for the overlay export");
  c_vol->add_option("--wells", vol.wells, "Well log CSV for the overlay");
  c_vol->add_option("--locations", vol.locations, "Locations CSV for the overlay");
  c_vol->add_option("--overlay-out", vol.overlay_out, "Overlay CSV output (time_ms,target,predicted)");

  SelectArgs sel;
  auto* c_sel = app.add_subcommand("select", "Sequential forward attribute selection with an ANN scorer");
  c_sel->add_option("--data", sel.data, "Dataset CSV")->required();
  c_sel->add_option("--candidates", sel.candidates, "Candidate attributes (default: all)")->delimiter(',');
  c_sel->add_option("--seed", sel.cfg.seed, "Random seed")->capture_default_str();
  c_sel->add_option("--hidden", sel.cfg.n_hidden, "Hidden units per evaluation")->capture_default_str();
  c_sel->add_option("--epochs", sel.cfg.epochs, "Epochs per evaluation")->capture_default_str();
  c_sel->add_option("--lr", sel.cfg.lr, "Initial step length")->capture_default_str();
  c_sel->add_option("--out", sel.out, "Trace CSV output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return static_cast<int>(sf::ErrorKind::config);
  }
  sf::log::quiet() = quiet;

  try {
    if (*c_synth) return run_synth(synth);
    if (*c_prep) return run_prep(prep);
    if (*c_train) {
      if (tr.model != "grid" && tr.model != "subtractive" && tr.model != "fcm" && tr.model != "ann") {
        std::cerr << "error: unknown model '" << tr.model << "'\n\n" << c_train->help();
        return static_cast<int>(sf::ErrorKind::config);
      }
      return run_train(tr);
    }
    if (*c_eval) return run_evaluate(ev);
    if (*c_vol) return run_volume(vol);
    if (*c_sel) return run_select(sel);
  } catch (const sf::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code();
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(sf::ErrorKind::input);
  }
  return 0;
}
