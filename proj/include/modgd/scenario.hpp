// include/modgd/scenario.hpp
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
// Replayable experiment descriptions: key=value text naming the sources,
// mixing level, noise and reverberation of a synthetic clip.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modgd/mixture.hpp"
#include "modgd/types.hpp"

namespace modgd {

struct SourceSpec {
  double f0_start = 0.0;       // Hz; required
  double f0_end = 0.0;         // Hz; defaults to f0_start
  double jitter = 0.0;         // fractional slow modulation depth, e.g. 0.05
  std::size_t harmonics = 5;
  double amp = 1.0;
  double rolloff = 0.0;        // harmonic l scaled by 1/l^rolloff
};

struct Scenario {
  int sample_rate = 16000;
  double duration_s = 2.0;
  std::uint64_t seed = 1;
  double tmr_db = 0.0;
  std::string noise = "none";  // none | white | babble
  double snr_db = 10.0;
  double t60_ms = 0.0;         // 0 disables reverberation
  std::vector<SourceSpec> sources;
};

struct RenderedScenario {
  SignalBuffer mixture;
  // Commanded f0 per source on the 10 ms hop grid; these are the
  // evaluation references.
  std::vector<std::vector<double>> reference_contours;
  double hop_ms = 10.0;
};

Scenario parse_scenario_text(const std::string& text);
Scenario load_scenario(const std::string& path);

// Deterministic rendering: contour jitter, harmonic phases, noise and the
// room response all derive from scenario.seed.
RenderedScenario render_scenario(const Scenario& scenario);

// Reference/detected pitch file helpers: "time_sec f0_hz" per line, or the
// two-track trajectory format "time_sec f0_track1 f0_track2".
void write_pitch_file(const std::string& path, const std::vector<double>& f0,
                      double hop_ms);
void write_trajectory_file(const std::string& path,
                           const std::vector<double>& track1,
                           const std::vector<double>& track2, double hop_ms);
// Returns one or two columns depending on the file.
std::vector<std::vector<double>> read_pitch_columns(const std::string& path);

}  // namespace modgd
