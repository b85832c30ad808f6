#include "commands.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>

#include <CLI11.hpp>

#include "hrv/error.hpp"
#include "hrv/io.hpp"
#include "hrv/labels.hpp"
#include "hrv/ml.hpp"
#include "hrv/stats.hpp"
#include "hrv/synth.hpp"
#include "hrv/windowing.hpp"

namespace hrv::cli {

namespace fs = std::filesystem;

namespace {

constexpr int kDataError = 2;

struct TrackOptions {
  WindowSpec window;
  bool normalize = false;
  bool no_artifact_filter = false;
};

struct LearnOptions {
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t folds = 10;
  std::string classifier = "all";
  bool group_by_time = false;
  bool normalize = false;
  std::string features;
  fs::path selection;
  fs::path save_model;
  ml::StabilityOptions stability;
};

struct Recording {
  std::string name;
  std::string subject;
  std::string label;
  std::vector<IndexVector> track;
};

void add_window_flags(CLI::App &cmd, TrackOptions &opt) {
  cmd.add_option("--window-s", opt.window.length_s, "Window length in seconds")->capture_default_str();
  cmd.add_option("--step-s", opt.window.step_s, "Window step in seconds")->capture_default_str();
  cmd.add_flag("--normalize", opt.normalize, "Min-max scale every feature to [0, 1]");
  cmd.add_flag("--no-artifact-filter", opt.no_artifact_filter, "Keep RR intervals as read");
}

void add_seed(CLI::App &cmd, LearnOptions &opt) {
  cmd.add_option("--seed", opt.seed, "Random seed")->required();
}

void add_learning_flags(CLI::App &cmd, LearnOptions &opt) {
  cmd.add_option("--classifier", opt.classifier, "lr, knn, nb, dt or all")
      ->check(CLI::IsMember({"lr", "knn", "nb", "dt", "all"}))
      ->capture_default_str();
  cmd.add_option("--folds", opt.folds, "Cross-validation folds")->capture_default_str();
  cmd.add_flag("--group-by-time", opt.group_by_time, "Folds are contiguous runs of windows");
  cmd.add_flag("--normalize", opt.normalize, "Min-max scale features within each group");
}

void add_stability_flags(CLI::App &cmd, LearnOptions &opt) {
  cmd.add_option("--resamples", opt.stability.resamples)->capture_default_str();
  cmd.add_option("--subsample", opt.stability.subsample_fraction)->capture_default_str();
  cmd.add_option("--weakness", opt.stability.weakness)->capture_default_str();
  cmd.add_option("--threshold", opt.stability.threshold)->capture_default_str();
}

std::vector<ml::ClassifierKind> classifier_kinds(const std::string &name) {
  if (name == "all")
    return {std::begin(ml::kAllClassifiers), std::end(ml::kAllClassifiers)};
  return {*ml::classifier_from_string(name)};
}

// Thermal names keep their natural order; any other label is numbered after them.
class LabelCodes {
public:
  int code(const std::string &label) {
    if (const auto s = thermal_state_from_string(label))
      return static_cast<int>(*s);
    const auto [it, inserted] = extra_.try_emplace(label, 100 + static_cast<int>(extra_.size()));
    return it->second;
  }

private:
  std::map<std::string, int> extra_;
};

std::vector<IndexVector> track_of(const RrSeries &raw, const TrackOptions &opt, std::ostream &err,
                                  const std::string &name) {
  const RrSeries rr = opt.no_artifact_filter ? raw : filter_artifacts(raw);
  if (rr.size() != raw.size())
    err << "info: " << name << ": artifact filter removed " << raw.size() - rr.size() << " intervals\n";
  auto track = compute_track(rr, opt.window);
  const auto sparse = std::count_if(track.begin(), track.end(), [](const auto &iv) { return iv.low_density; });
  if (sparse > 0)
    err << "warning: " << name << ": " << sparse << " windows hold fewer than " << kMinWindowIntervals
        << " intervals\n";
  return track;
}

std::vector<Recording> load_tracks(const fs::path &manifest) {
  std::vector<Recording> out;
  for (const auto &entry : io::read_manifest(manifest)) {
    auto track = io::read_track_csv(entry.path);
    out.push_back({entry.path.stem().string(), entry.subject,
                   entry.label.empty() ? track.label : entry.label, std::move(track.rows)});
  }
  return out;
}

// Recordings grouped by subject, in order of first appearance.
std::vector<std::pair<std::string, std::vector<const Recording *>>> by_subject(const std::vector<Recording> &recs) {
  std::vector<std::pair<std::string, std::vector<const Recording *>>> groups;
  for (const auto &r : recs) {
    const std::string key = r.subject.empty() ? "all" : r.subject;
    auto it = std::find_if(groups.begin(), groups.end(), [&](const auto &g) { return g.first == key; });
    if (it == groups.end()) {
      groups.emplace_back(key, std::vector<const Recording *>{});
      it = std::prev(groups.end());
    }
    it->second.push_back(&r);
  }
  return groups;
}

ml::FeatureMatrix group_matrix(const std::vector<const Recording *> &group, bool normalize, LabelCodes &codes) {
  std::vector<IndexVector> rows;
  std::vector<int> labels;
  for (const auto *r : group) {
    rows.insert(rows.end(), r->track.begin(), r->track.end());
    labels.insert(labels.end(), r->track.size(), codes.code(r->label));
  }
  if (normalize && !rows.empty())
    rows = normalize_unit_interval(rows);
  std::vector<std::vector<double>> values;
  std::vector<double> times;
  for (const auto &iv : rows) {
    values.emplace_back(iv.values.begin(), iv.values.end());
    times.push_back(iv.window_start_s);
  }
  return ml::FeatureMatrix({kFeatureNames.begin(), kFeatureNames.end()}, std::move(values), std::move(labels),
                           std::move(times));
}

ml::FeatureMatrix pooled_matrix(const std::vector<Recording> &recs, bool normalize, LabelCodes &codes,
                                std::ostream &err) {
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;
  std::size_t dropped = 0;
  for (const auto &[name, group] : by_subject(recs)) {
    const auto fm = group_matrix(group, normalize, codes);
    dropped += fm.dropped_rows();
    rows.insert(rows.end(), fm.rows().begin(), fm.rows().end());
    labels.insert(labels.end(), fm.labels().begin(), fm.labels().end());
  }
  if (dropped > 0)
    err << "info: dropped " << dropped << " rows with undefined indices\n";
  return ml::FeatureMatrix({kFeatureNames.begin(), kFeatureNames.end()}, std::move(rows), std::move(labels));
}

std::vector<std::string> split_list(const std::string &s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ','))
    if (!item.empty())
      out.push_back(item);
  return out;
}

std::vector<std::string> selected_from_csv(const fs::path &path) {
  const auto table = io::read_csv(path, "feature,frequency,selected");
  std::vector<std::string> out;
  for (const auto &row : table.rows)
    if (row.size() == 3 && row[2] == "1")
      out.push_back(row[0]);
  return out;
}

ml::SelectionReport run_select(const std::vector<Recording> &recs, const LearnOptions &opt, std::ostream &err) {
  LabelCodes codes;
  const auto fm = pooled_matrix(recs, opt.normalize, codes, err);
  auto stability = opt.stability;
  stability.seed = opt.seed;
  return ml::stability_select(fm, stability);
}

ml::CvTable run_cv(const std::vector<Recording> &recs, const LearnOptions &opt,
                   const std::vector<std::string> &features, std::ostream &err) {
  ml::CvTable table;
  table.kinds = classifier_kinds(opt.classifier);
  const auto strategy = opt.group_by_time ? ml::FoldStrategy::group_by_time : ml::FoldStrategy::shuffled;
  LabelCodes codes;
  for (const auto &[name, group] : by_subject(recs)) {
    auto fm = group_matrix(group, opt.normalize, codes);
    if (fm.dropped_rows() > 0)
      err << "info: " << name << ": dropped " << fm.dropped_rows() << " rows with undefined indices\n";
    if (!features.empty())
      fm = fm.select_columns(features);
    std::vector<double> row;
    for (auto kind : table.kinds)
      row.push_back(ml::stratified_cv(fm, opt.folds, kind, opt.seed, strategy).mean_accuracy);
    table.groups.push_back(name);
    table.accuracy.push_back(std::move(row));
  }
  if (!opt.save_model.empty()) {
    const auto fm_all = pooled_matrix(recs, opt.normalize, codes, err);
    const auto fm = features.empty() ? fm_all : fm_all.select_columns(features);
    ml::Model::train(fm, table.kinds.front()).save(opt.save_model);
  }
  return table;
}

std::vector<std::string> cv_features(const LearnOptions &opt) {
  if (!opt.features.empty())
    return split_list(opt.features);
  if (!opt.selection.empty()) {
    auto chosen = selected_from_csv(opt.selection);
    if (!chosen.empty())
      return chosen;
  }
  return {};
}

// ---- subcommands ----

int cmd_detect(const fs::path &input, std::optional<double> rate, const fs::path &output, std::ostream &err) {
  const auto rec = io::read_ecg_csv(input, rate);
  const auto peaks = detect_r_peaks(rec);
  if (peaks.flat_signal)
    err << "warning: " << input.string() << ": flat signal, no QRS complexes\n";
  if (peaks.indices.size() < 2) {
    err << "warning: " << input.string() << ": fewer than 2 R-peaks detected; writing an empty RR file\n";
    io::write_rr_csv(output, RrSeries{});
    return 0;
  }
  io::write_rr_csv(output, peaks_to_rr(peaks, rec.sampling_rate()));
  return 0;
}

int cmd_track(const fs::path &input, const fs::path &output, const TrackOptions &opt, const std::string &label,
              const fs::path &periodogram_dir, std::ostream &err) {
  const auto raw = io::read_rr_csv(input);
  auto track = track_of(raw, opt, err, input.string());
  if (opt.normalize)
    track = normalize_unit_interval(track);
  io::write_track_csv(output, track, label);
  if (!periodogram_dir.empty()) {
    const RrSeries rr = opt.no_artifact_filter ? raw : filter_artifacts(raw);
    const auto windows = sliding_windows(rr, opt.window);
    const auto grid = default_frequency_grid(opt.window.length_s);
    for (std::size_t k = 0; k < windows.size(); ++k) {
      if (windows[k].size() < 4)
        continue;
      char name[32];
      std::snprintf(name, sizeof name, "window_%04zu.csv", k);
      io::write_periodogram_csv(periodogram_dir / name, lomb_scargle(windows[k], grid));
    }
  }
  return 0;
}

int cmd_stats(const std::vector<fs::path> &tracks, const fs::path &output) {
  if (tracks.size() < 2)
    throw Error(ErrorKind::too_few_groups, "stats needs at least two track files");
  std::vector<io::Track> loaded;
  std::vector<std::string> names;
  for (const auto &p : tracks) {
    loaded.push_back(io::read_track_csv(p));
    names.push_back(loaded.back().label.empty() ? p.stem().string() : loaded.back().label);
  }
  std::ofstream out = [&] {
    if (output.has_parent_path())
      fs::create_directories(output.parent_path());
    std::ofstream o(output, std::ios::binary);
    if (!o)
      throw Error(ErrorKind::io_error, "cannot write " + output.string());
    return o;
  }();
  out << "feature,test,group_a,group_b,statistic,p_value\n";
  for (std::size_t f = 0; f < kFeatureCount; ++f) {
    std::vector<std::vector<double>> groups;
    for (const auto &t : loaded) {
      auto &g = groups.emplace_back();
      for (const auto &iv : t.rows)
        if (!is_undefined(iv.values[f]))
          g.push_back(iv.values[f]);
    }
    const auto feature = kFeatureNames[f];
    const bool all_sized = std::all_of(groups.begin(), groups.end(), [](const auto &g) { return g.size() >= 2; });
    if (all_sized) {
      const auto r = levene(groups);
      out << feature << ",levene,all,," << io::format_number(r.statistic) << ',' << io::format_number(r.p_value)
          << '\n';
    }
    for (std::size_t a = 0; a < groups.size(); ++a)
      for (std::size_t b = a + 1; b < groups.size(); ++b) {
        if (groups[a].empty() || groups[b].empty())
          continue;
        const auto r = mann_whitney_u(groups[a], groups[b]);
        out << feature << ',' << r.method << ',' << names[a] << ',' << names[b] << ','
            << io::format_number(r.statistic) << ',' << io::format_number(r.p_value) << '\n';
      }
  }
  return 0;
}

void write_cohort(const std::vector<CohortRecording> &cohort, const fs::path &dir) {
  std::vector<io::ManifestEntry> entries;
  for (const auto &rec : cohort) {
    const auto path = dir / (rec.subject + "_" + std::string(to_string(rec.label)) + ".csv");
    io::write_rr_csv(path, rec.rr);
    entries.push_back({path, std::string(to_string(rec.label)), rec.subject});
  }
  io::write_manifest(dir / "manifest.csv", entries);
}

struct PipelineOptions {
  fs::path manifest;
  fs::path out_dir;
  std::optional<double> rate;
  TrackOptions track;
  LearnOptions learn;
};

int cmd_pipeline(const PipelineOptions &opt, std::ostream &err) {
  std::vector<Recording> recs;
  std::vector<io::ManifestEntry> track_entries;
  for (const auto &entry : io::read_manifest(opt.manifest)) {
    const std::string name = entry.path.stem().string();
    RrSeries rr;
    if (io::looks_like_rr_csv(entry.path)) {
      rr = io::read_rr_csv(entry.path);
    } else {
      const auto rec = io::read_ecg_csv(entry.path, opt.rate);
      rr = peaks_to_rr(detect_r_peaks(rec), rec.sampling_rate());
      io::write_rr_csv(opt.out_dir / "rr" / (name + ".csv"), rr);
    }
    auto track = track_of(rr, opt.track, err, entry.path.string());
    const auto track_path = opt.out_dir / "tracks" / (name + ".csv");
    io::write_track_csv(track_path, track, entry.label);
    track_entries.push_back({track_path, entry.label, entry.subject});
    recs.push_back({name, entry.subject, entry.label, std::move(track)});
  }
  io::write_manifest(opt.out_dir / "tracks" / "manifest.csv", track_entries);

  auto learn = opt.learn;
  learn.normalize = opt.track.normalize;
  const auto selection = run_select(recs, learn, err);
  ml::write_selection_csv(opt.out_dir / "selection.csv", selection);
  if (selection.selected.empty())
    err << "warning: no feature reached the selection threshold; cross-validating on all features\n";
  const auto table = run_cv(recs, learn, selection.selected, err);
  ml::write_cv_table_csv(opt.out_dir / "cv.csv", table);
  return 0;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &err) {
  CLI::App app{"Heart rate variability analysis and thermal-state classification"};
  app.require_subcommand(1);

  // detect
  fs::path detect_in, detect_out;
  std::optional<double> detect_rate;
  auto *detect = app.add_subcommand("detect", "ECG CSV -> RR CSV via QRS detection");
  detect->add_option("--input", detect_in, "ECG CSV (t_s,mv or a single column)")->required();
  detect->add_option("--rate", detect_rate, "Sampling rate in Hz (required for headerless input)");
  detect->add_option("--output", detect_out, "RR CSV")->required();

  // track
  fs::path track_in, track_out, periodogram_dir;
  std::string track_label;
  TrackOptions track_opt;
  auto *track = app.add_subcommand("track", "RR CSV -> windowed HRV index track");
  track->add_option("--input", track_in, "RR CSV")->required();
  track->add_option("--output", track_out, "Track CSV")->required();
  track->add_option("--label", track_label, "Value for the label column");
  track->add_option("--periodogram-dir", periodogram_dir, "Also dump each window's periodogram here");
  add_window_flags(*track, track_opt);

  // select
  fs::path select_manifest, select_out;
  LearnOptions select_opt;
  auto *select = app.add_subcommand("select", "Stability selection over labelled tracks");
  select->add_option("--manifest", select_manifest, "CSV path,label[,subject] of track files")->required();
  select->add_option("--output", select_out, "Selection report CSV")->required();
  select->add_flag("--normalize", select_opt.normalize, "Min-max scale features within each subject");
  add_seed(*select, select_opt);
  add_stability_flags(*select, select_opt);

  // cv
  fs::path cv_manifest, cv_out;
  LearnOptions cv_opt;
  auto *cv = app.add_subcommand("cv", "Stratified k-fold cross-validation per subject");
  cv->add_option("--manifest", cv_manifest, "CSV path,label[,subject] of track files")->required();
  cv->add_option("--output", cv_out, "Accuracy table CSV")->required();
  cv->add_option("--features", cv_opt.features, "Comma-separated feature subset");
  cv->add_option("--selection", cv_opt.selection, "Use the features selected in this report");
  cv->add_option("--save-model", cv_opt.save_model, "Train the first classifier on all rows and save it");
  add_seed(*cv, cv_opt);
  add_learning_flags(*cv, cv_opt);

  // stats
  std::vector<fs::path> stats_tracks;
  fs::path stats_out;
  auto *stats = app.add_subcommand("stats", "Levene and pairwise Mann-Whitney tests per index");
  stats->add_option("tracks", stats_tracks, "Track CSVs, one per group")->required();
  stats->add_option("--output", stats_out, "Result CSV")->required();

  // synth
  auto *synth = app.add_subcommand("synth", "Generate synthetic RR, ECG or cohort data");
  synth->require_subcommand(1);
  RrModel model;
  fs::path synth_out, truth_out;
  double ecg_rate = 1000.0;
  std::optional<double> snr_db;
  auto add_model_flags = [&](CLI::App &cmd) {
    cmd.add_option("--mean-rr", model.mean_rr)->capture_default_str();
    cmd.add_option("--vlf-amp", model.vlf_amp)->capture_default_str();
    cmd.add_option("--vlf-freq", model.vlf_freq)->capture_default_str();
    cmd.add_option("--lf-amp", model.lf_amp)->capture_default_str();
    cmd.add_option("--lf-freq", model.lf_freq)->capture_default_str();
    cmd.add_option("--hf-amp", model.hf_amp)->capture_default_str();
    cmd.add_option("--hf-freq", model.hf_freq)->capture_default_str();
    cmd.add_option("--noise-sd", model.noise_sd)->capture_default_str();
    cmd.add_option("--duration-s", model.duration_s)->capture_default_str();
    cmd.add_option("--seed", model.seed)->required();
    cmd.add_option("--output", synth_out)->required();
  };
  auto *synth_rr_cmd = synth->add_subcommand("rr", "RR CSV from a sinusoidal interval model");
  add_model_flags(*synth_rr_cmd);
  auto *synth_ecg_cmd = synth->add_subcommand("ecg", "ECG CSV rendered from an interval model");
  add_model_flags(*synth_ecg_cmd);
  synth_ecg_cmd->add_option("--rate", ecg_rate)->capture_default_str();
  synth_ecg_cmd->add_option("--snr-db", snr_db);
  synth_ecg_cmd->add_option("--truth", truth_out, "Write true R-peak times (t_s) here");
  fs::path cohort_dir;
  std::size_t per_class = 10;
  double cohort_duration = 1800.0;
  std::uint64_t cohort_seed = 0;
  bool identical = false;
  auto *synth_cohort_cmd = synth->add_subcommand("cohort", "Labelled RR files for a three-class cohort");
  synth_cohort_cmd->add_option("--out-dir", cohort_dir)->required();
  synth_cohort_cmd->add_option("--per-class", per_class)->capture_default_str();
  synth_cohort_cmd->add_option("--duration-s", cohort_duration)->capture_default_str();
  synth_cohort_cmd->add_option("--seed", cohort_seed)->required();
  synth_cohort_cmd->add_flag("--identical", identical, "Give every class the neutral model");

  // pipeline
  PipelineOptions pipe;
  auto *pipeline = app.add_subcommand("pipeline", "detect -> track -> select -> cv");
  pipeline->add_option("--manifest", pipe.manifest, "CSV path,label[,subject] of ECG or RR files")->required();
  pipeline->add_option("--out-dir", pipe.out_dir)->required();
  pipeline->add_option("--rate", pipe.rate, "ECG sampling rate for headerless inputs");
  pipeline->add_option("--window-s", pipe.track.window.length_s)->capture_default_str();
  pipeline->add_option("--step-s", pipe.track.window.step_s)->capture_default_str();
  pipeline->add_flag("--normalize", pipe.track.normalize, "Min-max scale features within each subject");
  pipeline->add_flag("--no-artifact-filter", pipe.track.no_artifact_filter);
  pipeline->add_option("--seed", pipe.learn.seed)->required();
  pipeline->add_option("--classifier", pipe.learn.classifier)
      ->check(CLI::IsMember({"lr", "knn", "nb", "dt", "all"}))
      ->capture_default_str();
  pipeline->add_option("--folds", pipe.learn.folds)->capture_default_str();
  pipeline->add_flag("--group-by-time", pipe.learn.group_by_time);
  add_stability_flags(*pipeline, pipe.learn);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    return app.exit(e, err, err);
  }

  try {
    if (*detect)
      return cmd_detect(detect_in, detect_rate, detect_out, err);
    if (*track)
      return cmd_track(track_in, track_out, track_opt, track_label, periodogram_dir, err);
    if (*select) {
      const auto recs = load_tracks(select_manifest);
      ml::write_selection_csv(select_out, run_select(recs, select_opt, err));
      return 0;
    }
    if (*cv) {
      const auto recs = load_tracks(cv_manifest);
      ml::write_cv_table_csv(cv_out, run_cv(recs, cv_opt, cv_features(cv_opt), err));
      return 0;
    }
    if (*stats)
      return cmd_stats(stats_tracks, stats_out);
    if (*synth_rr_cmd) {
      io::write_rr_csv(synth_out, synth_rr(model));
      return 0;
    }
    if (*synth_ecg_cmd) {
      const auto rr = synth_rr(model);
      EcgSynthOptions eo;
      eo.sampling_rate = ecg_rate;
      eo.snr_db = snr_db;
      eo.seed = model.seed;
      const auto beats = beat_times(rr, 1.5);
      const auto ecg = synth_ecg(beats, eo);
      io::write_ecg_csv(synth_out, ecg.recording);
      if (!truth_out.empty()) {
        std::ofstream out(truth_out, std::ios::binary);
        out << "t_s\n";
        for (std::size_t idx : ecg.truth)
          out << io::format_number(static_cast<double>(idx) / ecg_rate) << '\n';
      }
      return 0;
    }
    if (*synth_cohort_cmd) {
      auto cohort = thermal_study_cohort();
      if (identical)
        cohort.classes.fill(cohort.classes[static_cast<std::size_t>(ThermalState::neutral)]);
      write_cohort(synth_cohort(cohort, per_class, cohort_duration, cohort_seed), cohort_dir);
      return 0;
    }
    if (*pipeline)
      return cmd_pipeline(pipe, err);
  } catch (const Error &e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}

} // namespace hrv::cli
