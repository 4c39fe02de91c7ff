// src/pipeline.cpp
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

#include "modgd/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

namespace modgd {

namespace {

struct FrameSeries {
  std::vector<FramePitches> pitches;
  std::vector<RegionLabel> labels;
  std::vector<double> flux;
  std::vector<double> energy;
};

FrameSeries analyze_all(const std::vector<std::vector<double>>& frames,
                        int sample_rate, const PipelineConfig& cfg,
                        std::vector<FrameAnalysis>* keep_details) {
  FrameSeries series;
  series.pitches.reserve(frames.size());
  series.flux.reserve(frames.size());
  series.energy.reserve(frames.size());

  PitchEngineConfig engine = cfg.engine;
  engine.window = cfg.frame.window;  // autocorr normalization must match

  PowerSpectrum prev_spec;
  for (std::size_t t = 0; t < frames.size(); ++t) {
    FrameAnalysis fa = analyze_frame(frames[t], sample_rate, engine);
    series.flux.push_back(t == 0 ? 0.0 : spectral_flux(fa.spectrum, prev_spec));
    series.energy.push_back(fa.rms);
    series.pitches.push_back(fa.pitches);
    prev_spec = fa.spectrum;
    if (keep_details) keep_details->push_back(std::move(fa));
  }

  std::vector<int> n_candidates(series.pitches.size(), 0);
  for (std::size_t t = 0; t < series.pitches.size(); ++t) {
    n_candidates[t] = (series.pitches[t].f0_a ? 1 : 0) +
                      (series.pitches[t].f0_b ? 1 : 0);
  }
  series.labels =
      detect_single_or_silent(series.flux, series.energy, n_candidates,
                              cfg.postprocess, cfg.engine.silence_rms);

  // Region handling: silent frames lose all candidates, single-source
  // frames keep only the first-pass (monopitch) estimate.
  for (std::size_t t = 0; t < series.pitches.size(); ++t) {
    if (series.labels[t] == RegionLabel::none) {
      series.pitches[t] = FramePitches{};
    } else if (series.labels[t] == RegionLabel::one) {
      series.pitches[t].f0_b.reset();
      series.pitches[t].salience_b = 0.0;
      series.pitches[t].lag_b = 0.0;
    }
  }
  return series;
}

// DP grouping: run the optimal-path search over each block of frames that
// has candidates, assign the chosen path to one track and the leftovers to
// the other, then order the tracks by mean pitch.
std::pair<PitchTrack, PitchTrack> group_dp(
    const std::vector<FramePitches>& per_frame) {
  const std::size_t n = per_frame.size();
  PitchTrack a, b;
  a.f0.assign(n, 0.0);
  b.f0.assign(n, 0.0);

  std::size_t t = 0;
  while (t < n) {
    if (!per_frame[t].f0_a && !per_frame[t].f0_b) {
      ++t;
      continue;
    }
    std::size_t end = t;
    while (end < n && (per_frame[end].f0_a || per_frame[end].f0_b)) ++end;

    std::vector<std::vector<double>> cands;
    for (std::size_t j = t; j < end; ++j) {
      std::vector<double> frame;
      if (per_frame[j].f0_a) frame.push_back(*per_frame[j].f0_a);
      if (per_frame[j].f0_b) frame.push_back(*per_frame[j].f0_b);
      cands.push_back(std::move(frame));
    }
    const auto path = dp_group(cands);
    for (std::size_t j = t; j < end; ++j) {
      a.f0[j] = path[j - t];
      // Whatever the path did not take stays on the other track.
      for (double cand : cands[j - t]) {
        if (cand != path[j - t]) b.f0[j] = cand;
      }
    }
    t = end;
  }

  auto mean_voiced = [](const PitchTrack& tr) {
    double sum = 0.0;
    std::size_t cnt = 0;
    for (double v : tr.f0) {
      if (v > 0.0) {
        sum += v;
        ++cnt;
      }
    }
    return cnt ? sum / static_cast<double>(cnt) : 0.0;
  };
  PitchTrack high = mean_voiced(a) >= mean_voiced(b) ? a : b;
  PitchTrack low = mean_voiced(a) >= mean_voiced(b) ? b : a;
  high.label = TrackLabel::high;
  low.label = TrackLabel::low;
  return {high, low};
}

}  // namespace

UtteranceEstimate estimate_utterance(const SignalBuffer& signal,
                                     const PipelineConfig& cfg) {
  const auto frames = frame_signal(signal, cfg.frame);
  FrameSeries series = analyze_all(frames, signal.sample_rate, cfg, nullptr);

  auto [high, low] = cfg.grouping == GroupingMode::high_low
                         ? group_high_low(series.pitches)
                         : group_dp(series.pitches);

  UtteranceEstimate est;
  est.hop_ms = cfg.frame.hop_ms;
  est.high = remove_strays(high, cfg.postprocess, cfg.frame.hop_ms);
  est.low = remove_strays(low, cfg.postprocess, cfg.frame.hop_ms);
  est.per_frame = std::move(series.pitches);
  est.labels = std::move(series.labels);
  est.flux = std::move(series.flux);
  est.energy = std::move(series.energy);
  return est;
}

namespace {

void write_rows(const std::string& path,
                const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open dump file for writing: " + path);
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.6g", row[i]);
      if (i) out << ' ';
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing dump file: " + path);
}

}  // namespace

UtteranceEstimate estimate_utterance_dumped(const SignalBuffer& signal,
                                            const PipelineConfig& cfg,
                                            const DumpOptions& dump) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(dump.directory, ec);
  if (ec) throw IoError("cannot create dump directory: " + dump.directory);

  const auto frames = frame_signal(signal, cfg.frame);
  std::vector<FrameAnalysis> details;
  details.reserve(frames.size());
  FrameSeries series = analyze_all(frames, signal.sample_rate, cfg, &details);

  auto [high, low] = cfg.grouping == GroupingMode::high_low
                         ? group_high_low(series.pitches)
                         : group_dp(series.pitches);

  UtteranceEstimate est;
  est.hop_ms = cfg.frame.hop_ms;
  est.high = remove_strays(high, cfg.postprocess, cfg.frame.hop_ms);
  est.low = remove_strays(low, cfg.postprocess, cfg.frame.hop_ms);
  est.per_frame = series.pitches;
  est.labels = series.labels;
  est.flux = series.flux;
  est.energy = series.energy;

  const fs::path dir(dump.directory);
  std::vector<std::vector<double>> flat, m1, m2, peaks, flux_rows, traj;
  for (std::size_t t = 0; t < details.size(); ++t) {
    flat.push_back(details[t].flattened.values);
    m1.push_back(details[t].modgd_pass1.values);
    std::vector<double> second = details[t].modgd_pass2.values;
    if (second.empty() && !details[t].modgd_pass1.values.empty()) {
      second.assign(details[t].modgd_pass1.values.size(), 0.0);
    }
    m2.push_back(std::move(second));
    const auto& p = est.per_frame[t];
    peaks.push_back({static_cast<double>(t), p.lag_a, p.salience_a, p.lag_b,
                     p.salience_b});
    flux_rows.push_back({static_cast<double>(t), est.flux[t], est.energy[t],
                         static_cast<double>(static_cast<int>(est.labels[t]))});
    traj.push_back({static_cast<double>(t) * cfg.frame.hop_ms * 1e-3,
                    est.low.f0[t], est.high.f0[t]});
  }
  write_rows((dir / "flattened.txt").string(), flat);
  write_rows((dir / "modgd_pass1.txt").string(), m1);
  write_rows((dir / "modgd_pass2.txt").string(), m2);
  write_rows((dir / "peaks.txt").string(), peaks);
  write_rows((dir / "flux.txt").string(), flux_rows);
  write_rows((dir / "trajectories.txt").string(), traj);
  return est;
}

}  // namespace modgd
