// tools/modgd_main.cpp
//
// Copyright 2026 modgd-multipitch contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Command-line front door: estimation, synthesis/mixing, evaluation,
// speaker-count train/infer and plot-data export.
//
// Exit codes: 0 success, 1 usage error, 2 I/O error, 3 numerical failure.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modgd/config.hpp"
#include "modgd/gmm.hpp"
#include "modgd/metrics.hpp"
#include "modgd/pipeline.hpp"
#include "modgd/scenario.hpp"
#include "modgd/smcc.hpp"
#include "modgd/wav.hpp"

namespace {

namespace fs = std::filesystem;
using namespace modgd;

struct CommonFlags {
  std::string config_path;
  std::optional<double> seed;
  std::optional<double> fmin, fmax, alpha, gamma, rho;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config_path, "key=value config file");
  cmd->add_option("--seed", flags.seed, "random seed");
  cmd->add_option("--fmin", flags.fmin, "pitch search floor, Hz");
  cmd->add_option("--fmax", flags.fmax, "pitch search ceiling, Hz");
  cmd->add_option("--alpha", flags.alpha, "modgd compression exponent");
  cmd->add_option("--gamma", flags.gamma, "modgd denominator exponent");
  cmd->add_option("--rho", flags.rho, "stray-value threshold, Hz");
}

PipelineConfig resolve_config(const CommonFlags& flags) {
  PipelineConfig cfg;
  if (!flags.config_path.empty()) cfg = load_config(flags.config_path, cfg);
  if (flags.seed) cfg.seed = static_cast<std::uint64_t>(*flags.seed);
  if (flags.fmin) cfg.engine.range.f_min = *flags.fmin;
  if (flags.fmax) cfg.engine.range.f_max = *flags.fmax;
  if (flags.alpha) cfg.engine.modgd.alpha = *flags.alpha;
  if (flags.gamma) cfg.engine.modgd.gamma = *flags.gamma;
  if (flags.rho) cfg.postprocess.rho_hz = *flags.rho;
  return cfg;
}

std::string sibling_path(const std::string& base, const std::string& suffix) {
  fs::path p(base);
  fs::path stem = p.parent_path() / p.stem();
  return stem.string() + suffix;
}

int cmd_estimate(const std::string& input, const std::string& output,
                 const CommonFlags& flags, const std::string& dump_dir,
                 bool dp_grouping) {
  PipelineConfig cfg = resolve_config(flags);
  if (dp_grouping) cfg.grouping = GroupingMode::dynamic_programming;
  const SignalBuffer signal = read_wav(input);
  signal.validate();

  UtteranceEstimate est;
  if (dump_dir.empty()) {
    est = estimate_utterance(signal, cfg);
  } else {
    est = estimate_utterance_dumped(signal, cfg, DumpOptions{dump_dir});
  }
  write_trajectory_file(output, est.low.f0, est.high.f0, est.hop_ms);
  std::printf("wrote %s (%zu frames)\n", output.c_str(), est.low.f0.size());
  return 0;
}

Scenario scenario_with_overrides(const std::string& path,
                                 const CommonFlags& flags,
                                 std::optional<double> tmr_db,
                                 std::optional<double> snr_db,
                                 std::optional<double> t60_ms) {
  Scenario sc = load_scenario(path);
  if (flags.seed) sc.seed = static_cast<std::uint64_t>(*flags.seed);
  if (tmr_db) sc.tmr_db = *tmr_db;
  if (snr_db) {
    sc.snr_db = *snr_db;
    if (sc.noise == "none") sc.noise = "white";
  }
  if (t60_ms) sc.t60_ms = *t60_ms;
  return sc;
}

int render_and_write(const Scenario& sc, const std::string& out_wav) {
  const RenderedScenario rendered = render_scenario(sc);
  write_wav(out_wav, rendered.mixture);
  for (std::size_t s = 0; s < rendered.reference_contours.size(); ++s) {
    const std::string ref_path =
        sibling_path(out_wav, ".ref" + std::to_string(s + 1) + ".txt");
    write_pitch_file(ref_path, rendered.reference_contours[s], rendered.hop_ms);
  }
  std::printf("wrote %s (+%zu reference files)\n", out_wav.c_str(),
              rendered.reference_contours.size());
  return 0;
}

void print_report_row(std::FILE* f, const char* name, const EvalReport& r) {
  std::fprintf(f, "%-8s %9.2f %9.2f %11.3f %9.3f %9zu\n", name, r.accuracy_10,
               r.accuracy_20, r.mean_fine_error, r.e_fs, r.n_voiced);
}

int cmd_eval(const std::string& det_path, std::vector<std::string> ref_paths,
             const std::string& csv_path) {
  const auto det_cols = read_pitch_columns(det_path);
  std::vector<std::vector<double>> refs;
  for (const auto& p : ref_paths) {
    for (auto& col : read_pitch_columns(p)) refs.push_back(std::move(col));
  }
  if (refs.empty()) throw UsageError("eval: no reference tracks");

  std::vector<EvalReport> reports;
  if (det_cols.size() >= 2 && refs.size() >= 2) {
    PitchTrack a, b;
    a.f0 = det_cols[0];
    b.f0 = det_cols[1];
    const auto pair = score_pair(a, b, refs[0], refs[1]);
    reports.assign(pair.begin(), pair.end());
  } else if (det_cols.size() == 1 && refs.size() == 1) {
    reports.push_back(score_single(det_cols[0], refs[0]));
  } else {
    throw UsageError("eval: detected and reference track counts do not match");
  }

  std::printf("%-8s %9s %9s %11s %9s %9s\n", "speaker", "acc10(%)", "acc20(%)",
              "e_mean(Hz)", "e_fs(Hz)", "n_voiced");
  for (std::size_t i = 0; i < reports.size(); ++i) {
    print_report_row(stdout, std::to_string(i + 1).c_str(), reports[i]);
  }
  if (reports.size() == 2) {
    EvalReport overall;
    const double v1 = static_cast<double>(reports[0].n_voiced);
    const double v2 = static_cast<double>(reports[1].n_voiced);
    const double vt = std::max(v1 + v2, 1.0);
    overall.accuracy_10 =
        (reports[0].accuracy_10 * v1 + reports[1].accuracy_10 * v2) / vt;
    overall.accuracy_20 =
        (reports[0].accuracy_20 * v1 + reports[1].accuracy_20 * v2) / vt;
    const double c1 = static_cast<double>(reports[0].n_correct_10);
    const double c2 = static_cast<double>(reports[1].n_correct_10);
    const double ct = std::max(c1 + c2, 1.0);
    overall.mean_fine_error =
        (reports[0].mean_fine_error * c1 + reports[1].mean_fine_error * c2) / ct;
    overall.e_fs = (reports[0].e_fs * c1 + reports[1].e_fs * c2) / ct;
    overall.n_voiced = reports[0].n_voiced + reports[1].n_voiced;
    print_report_row(stdout, "overall", overall);
  }

  if (!csv_path.empty()) {
    std::ofstream csv(csv_path);
    if (!csv) throw IoError("cannot open CSV for writing: " + csv_path);
    csv << "speaker,accuracy_10,accuracy_20,mean_fine_error_hz,e_fs_hz,n_voiced\n";
    char buf[160];
    for (std::size_t i = 0; i < reports.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%zu,%.4f,%.4f,%.5f,%.5f,%zu\n", i + 1,
                    reports[i].accuracy_10, reports[i].accuracy_20,
                    reports[i].mean_fine_error, reports[i].e_fs,
                    reports[i].n_voiced);
      csv << buf;
    }
    if (!csv) throw IoError("failed writing CSV: " + csv_path);
  }
  return 0;
}

int cmd_train_count(const std::string& manifest_path, const std::string& out_path,
                    const CommonFlags& flags) {
  PipelineConfig cfg = resolve_config(flags);
  std::ifstream manifest(manifest_path);
  if (!manifest) throw IoError("cannot open manifest: " + manifest_path);

  std::map<int, std::vector<std::vector<double>>> per_class;
  std::string line;
  int line_no = 0;
  while (std::getline(manifest, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string wav_path;
    int label = 0;
    if (!(ls >> wav_path >> label) || label < 1) {
      throw UsageError("manifest line " + std::to_string(line_no) +
                       ": expected '<wav> <speaker-count>'");
    }
    const SignalBuffer signal = read_wav(wav_path);
    auto feats = smcc_features(signal, cfg.smcc);
    auto& bucket = per_class[label];
    bucket.insert(bucket.end(), feats.begin(), feats.end());
  }
  if (per_class.empty()) throw UsageError("manifest lists no training files");

  std::vector<GmmModel> models;
  for (const auto& [label, feats] : per_class) {
    GmmTrainOptions opts;
    opts.n_components = cfg.gmm_components;
    opts.max_iter = cfg.gmm_max_iter;
    opts.seed = cfg.seed + static_cast<std::uint64_t>(label);
    const auto trained = gmm_train(feats, opts, label);
    models.push_back(trained.model);
    std::printf("class %d: %zu vectors, final log-likelihood %.3f\n", label,
                feats.size(), trained.log_likelihood_history.back());
  }
  save_models(models, out_path);
  std::printf("wrote %s (%zu classes)\n", out_path.c_str(), models.size());
  return 0;
}

int cmd_count(const std::string& models_path, const std::string& wav_path,
              const CommonFlags& flags, const std::string& features_csv) {
  PipelineConfig cfg = resolve_config(flags);
  const auto models = load_models(models_path);
  const SignalBuffer signal = read_wav(wav_path);
  const auto feats = smcc_features(signal, cfg.smcc);

  if (!features_csv.empty()) {
    std::ofstream csv(features_csv);
    if (!csv) throw IoError("cannot open CSV for writing: " + features_csv);
    char buf[32];
    for (const auto& vec : feats) {
      for (std::size_t i = 0; i < vec.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.6g", vec[i]);
        if (i) csv << ',';
        csv << buf;
      }
      csv << '\n';
    }
  }

  const int label = count_speakers(feats, models);
  std::printf("%d\n", label);
  return 0;
}

int cmd_plotdata(const std::string& dump_dir, const std::string& out_dir) {
  if (!fs::is_directory(dump_dir)) {
    throw IoError("dump directory not found: " + dump_dir);
  }
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError("cannot create output directory: " + out_dir);

  const char* names[] = {"flattened",  "modgd_pass1", "modgd_pass2",
                         "peaks",      "flux",        "trajectories"};
  std::size_t converted = 0;
  for (const char* name : names) {
    const fs::path src = fs::path(dump_dir) / (std::string(name) + ".txt");
    if (!fs::exists(src)) continue;
    std::ifstream in(src);
    if (!in) throw IoError("cannot open dump file: " + src.string());
    const fs::path dst = fs::path(out_dir) / (std::string(name) + ".csv");
    std::ofstream out(dst);
    if (!out) throw IoError("cannot open for writing: " + dst.string());
    std::string line;
    while (std::getline(in, line)) {
      for (char& c : line) {
        if (c == ' ') c = ',';
      }
      out << line << '\n';
    }
    ++converted;
  }
  if (converted == 0) {
    throw IoError("no dump files found in: " + dump_dir);
  }
  std::printf("converted %zu dump files into %s\n", converted, out_dir.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"modified-group-delay multipitch toolkit"};
  app.require_subcommand(1);

  CommonFlags flags;

  // estimate
  auto* est = app.add_subcommand("estimate", "estimate two pitch tracks from a WAV");
  std::string est_input, est_output = "trajectories.txt", est_dump;
  bool est_dp = false;
  est->add_option("input", est_input, "input WAV file")->required();
  est->add_option("--out", est_output, "output trajectory file");
  est->add_option("--dump-intermediates", est_dump,
                  "directory for per-frame spectra/MODGD dumps");
  est->add_flag("--dp-grouping", est_dp, "use DP grouping instead of high/low");
  add_common_flags(est, flags);

  // synth
  auto* synth = app.add_subcommand("synth", "render a single-source scenario");
  std::string sy_scn, sy_out = "synth.wav";
  std::optional<double> sy_tmr, sy_snr, sy_t60;
  synth->add_option("scenario", sy_scn, "scenario file")->required();
  synth->add_option("--out", sy_out, "output WAV path");
  synth->add_option("--snr-db", sy_snr, "override noise SNR");
  synth->add_option("--t60-ms", sy_t60, "override reverberation time");
  add_common_flags(synth, flags);

  // mix
  auto* mix = app.add_subcommand("mix", "render a multi-source mixture scenario");
  std::string mx_scn, mx_out = "mixture.wav";
  std::optional<double> mx_tmr, mx_snr, mx_t60;
  mix->add_option("scenario", mx_scn, "scenario file")->required();
  mix->add_option("--out", mx_out, "output WAV path");
  mix->add_option("--tmr-db", mx_tmr, "override target-to-masker ratio");
  mix->add_option("--snr-db", mx_snr, "override noise SNR");
  mix->add_option("--t60-ms", mx_t60, "override reverberation time");
  add_common_flags(mix, flags);

  // eval
  auto* ev = app.add_subcommand("eval", "score detected tracks against references");
  std::string ev_det, ev_csv;
  std::vector<std::string> ev_refs;
  ev->add_option("--det", ev_det, "detected trajectory file")->required();
  ev->add_option("--ref", ev_refs, "reference pitch file(s)")->required();
  ev->add_option("--csv", ev_csv, "also write the report as CSV");

  // train-count
  auto* tr = app.add_subcommand("train-count", "train speaker-count GMMs");
  std::string tr_manifest, tr_out = "models.txt";
  tr->add_option("--manifest", tr_manifest, "lines of '<wav> <speaker-count>'")
      ->required();
  tr->add_option("--out", tr_out, "output model file");
  add_common_flags(tr, flags);

  // count
  auto* ct = app.add_subcommand("count", "estimate the number of speakers");
  std::string ct_models, ct_wav, ct_csv;
  ct->add_option("--models", ct_models, "model file from train-count")->required();
  ct->add_option("input", ct_wav, "input WAV file")->required();
  ct->add_option("--features-csv", ct_csv, "dump SMCC features as CSV");
  add_common_flags(ct, flags);

  // plotdata
  auto* pd = app.add_subcommand("plotdata", "convert estimate dumps to CSV");
  std::string pd_dump, pd_out = "plotdata";
  pd->add_option("--dump", pd_dump, "dump directory from estimate")->required();
  pd->add_option("--out-dir", pd_out, "CSV output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 1;
  }

  try {
    if (est->parsed()) return cmd_estimate(est_input, est_output, flags, est_dump, est_dp);
    if (synth->parsed()) {
      Scenario sc = scenario_with_overrides(sy_scn, flags, sy_tmr, sy_snr, sy_t60);
      if (sc.sources.size() != 1) {
        throw UsageError("synth expects a single-source scenario (use mix)");
      }
      return render_and_write(sc, sy_out);
    }
    if (mix->parsed()) {
      Scenario sc = scenario_with_overrides(mx_scn, flags, mx_tmr, mx_snr, mx_t60);
      if (sc.sources.size() < 2) {
        throw UsageError("mix expects at least two sources (use synth)");
      }
      return render_and_write(sc, mx_out);
    }
    if (ev->parsed()) return cmd_eval(ev_det, ev_refs, ev_csv);
    if (tr->parsed()) return cmd_train_count(tr_manifest, tr_out, flags);
    if (ct->parsed()) return cmd_count(ct_models, ct_wav, flags, ct_csv);
    if (pd->parsed()) return cmd_plotdata(pd_dump, pd_out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NumericError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 1;
}
