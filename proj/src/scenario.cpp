// src/scenario.cpp
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

#include "modgd/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "modgd/rng.hpp"

namespace modgd {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kHopMs = 10.0;

std::map<std::string, std::string> parse_kv(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    auto trim = [](std::string s) {
      const auto b = s.find_first_not_of(" \t\r");
      if (b == std::string::npos) return std::string();
      const auto e = s.find_last_not_of(" \t\r");
      return s.substr(b, e - b + 1);
    };
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw UsageError("scenario line " + std::to_string(line_no) +
                       ": expected key=value");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("scenario: bad numeric value for " + key + ": " + value);
  }
}

}  // namespace

Scenario parse_scenario_text(const std::string& text) {
  const auto kv = parse_kv(text);
  Scenario sc;
  std::map<int, SourceSpec> sources;

  for (const auto& [key, value] : kv) {
    if (key == "sample_rate") {
      sc.sample_rate = static_cast<int>(to_double(key, value));
    } else if (key == "duration") {
      sc.duration_s = to_double(key, value);
    } else if (key == "seed") {
      sc.seed = static_cast<std::uint64_t>(to_double(key, value));
    } else if (key == "tmr_db") {
      sc.tmr_db = to_double(key, value);
    } else if (key == "noise") {
      if (value != "none" && value != "white" && value != "babble") {
        throw UsageError("scenario: noise must be none|white|babble");
      }
      sc.noise = value;
    } else if (key == "snr_db") {
      sc.snr_db = to_double(key, value);
    } else if (key == "t60_ms") {
      sc.t60_ms = to_double(key, value);
    } else if (key.rfind("source", 0) == 0) {
      const auto dot = key.find('.');
      if (dot == std::string::npos || dot <= 6) {
        throw UsageError("scenario: bad source key: " + key);
      }
      int idx = 0;
      try {
        idx = std::stoi(key.substr(6, dot - 6));
      } catch (const std::exception&) {
        throw UsageError("scenario: bad source index in: " + key);
      }
      SourceSpec& spec = sources[idx];
      const std::string field = key.substr(dot + 1);
      if (field == "f0") {
        spec.f0_start = spec.f0_end = to_double(key, value);
      } else if (field == "f0_start") {
        spec.f0_start = to_double(key, value);
      } else if (field == "f0_end") {
        spec.f0_end = to_double(key, value);
      } else if (field == "jitter") {
        spec.jitter = to_double(key, value);
      } else if (field == "harmonics") {
        spec.harmonics = static_cast<std::size_t>(to_double(key, value));
      } else if (field == "amp") {
        spec.amp = to_double(key, value);
      } else if (field == "rolloff") {
        spec.rolloff = to_double(key, value);
      } else {
        throw UsageError("scenario: unknown source field: " + key);
      }
    } else {
      throw UsageError("scenario: unknown key: " + key);
    }
  }

  for (auto& [idx, spec] : sources) {
    if (!(spec.f0_start > 0.0)) {
      throw UsageError("scenario: source" + std::to_string(idx) + " needs an f0");
    }
    if (spec.f0_end <= 0.0) spec.f0_end = spec.f0_start;
    sc.sources.push_back(spec);
  }
  if (sc.sources.empty()) throw UsageError("scenario: no sources given");
  if (sc.sample_rate <= 0 || !(sc.duration_s > 0.0)) {
    throw UsageError("scenario: sample_rate and duration must be positive");
  }
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario_text(ss.str());
}

RenderedScenario render_scenario(const Scenario& scenario) {
  RenderedScenario out;
  out.hop_ms = kHopMs;
  Rng master(scenario.seed);

  const auto n_frames = static_cast<std::size_t>(
      std::ceil(scenario.duration_s / (kHopMs * 1e-3)));

  std::vector<SignalBuffer> rendered;
  for (std::size_t s = 0; s < scenario.sources.size(); ++s) {
    const SourceSpec& spec = scenario.sources[s];
    Rng rng = master.fork(s + 1);

    // Slow sinusoidal modulation stands in for natural contour movement.
    const double mod_rate = rng.uniform(0.5, 2.0);    // Hz
    const double mod_phase = rng.uniform(0.0, 2.0 * kPi);

    SyntheticSource src;
    src.duration_s = scenario.duration_s;
    src.num_harmonics = spec.harmonics;
    src.contour_hop_ms = kHopMs;
    src.f0_contour.resize(n_frames);
    for (std::size_t t = 0; t < n_frames; ++t) {
      const double time = static_cast<double>(t) * kHopMs * 1e-3;
      const double base = spec.f0_start + (spec.f0_end - spec.f0_start) *
                                              (time / scenario.duration_s);
      const double mod =
          1.0 + spec.jitter * std::sin(2.0 * kPi * mod_rate * time + mod_phase);
      src.f0_contour[t] = base * mod;
    }
    src.phases.resize(spec.harmonics);
    for (auto& p : src.phases) p = rng.uniform(0.0, 2.0 * kPi);
    src.amplitudes.resize(spec.harmonics);
    for (std::size_t l = 0; l < spec.harmonics; ++l) {
      src.amplitudes[l] =
          spec.amp / std::pow(static_cast<double>(l + 1), spec.rolloff);
    }

    out.reference_contours.push_back(src.f0_contour);
    rendered.push_back(synth_harmonic(src, scenario.sample_rate));
  }

  SignalBuffer mix = rendered.front();
  if (rendered.size() >= 2) {
    mix = mix_tmr(rendered[0], rendered[1], scenario.tmr_db);
    for (std::size_t s = 2; s < rendered.size(); ++s) {
      mix = mix_tmr(mix, rendered[s], scenario.tmr_db);
    }
  }

  if (scenario.noise != "none") {
    NoiseConfig noise;
    noise.kind = scenario.noise == "white" ? NoiseKind::white : NoiseKind::babble;
    noise.snr_db = scenario.snr_db;
    noise.seed = master.fork(9001).integer(~0ULL);
    mix = add_noise(mix, noise);
  }

  if (scenario.t60_ms > 0.0) {
    RirConfig rir;
    rir.t60_s = scenario.t60_ms * 1e-3;
    rir.seed = master.fork(9002).integer(~0ULL);
    const auto h = gen_rir(rir, scenario.sample_rate);
    mix = apply_reverb(mix, h);
    mix.samples.resize(
        static_cast<std::size_t>(scenario.duration_s * scenario.sample_rate + 0.5));
  }

  // Normalize to 0.7 of full scale so the 16-bit writer never clips.
  double peak = 0.0;
  for (double v : mix.samples) peak = std::max(peak, std::abs(v));
  if (peak > 0.0) {
    for (double& v : mix.samples) v *= 0.7 / peak;
  }
  out.mixture = std::move(mix);
  return out;
}

void write_pitch_file(const std::string& path, const std::vector<double>& f0,
                      double hop_ms) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  char buf[96];
  for (std::size_t t = 0; t < f0.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%.3f %.4f\n",
                  static_cast<double>(t) * hop_ms * 1e-3, f0[t]);
    out << buf;
  }
  if (!out) throw IoError("failed writing: " + path);
}

void write_trajectory_file(const std::string& path,
                           const std::vector<double>& track1,
                           const std::vector<double>& track2, double hop_ms) {
  if (track1.size() != track2.size()) {
    throw NumericError("trajectory tracks must have equal length");
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot open for writing: " + path);
  char buf[128];
  for (std::size_t t = 0; t < track1.size(); ++t) {
    std::snprintf(buf, sizeof(buf), "%.3f %.4f %.4f\n",
                  static_cast<double>(t) * hop_ms * 1e-3, track1[t], track2[t]);
    out << buf;
  }
  if (!out) throw IoError("failed writing: " + path);
}

std::vector<std::vector<double>> read_pitch_columns(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open pitch file: " + path);
  std::vector<std::vector<double>> columns;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    double t = 0.0;
    if (!(ls >> t)) {
      throw IoError(path + ": line " + std::to_string(line_no) + " is not numeric");
    }
    std::vector<double> values;
    double v = 0.0;
    while (ls >> v) values.push_back(v);
    if (values.empty()) {
      throw IoError(path + ": line " + std::to_string(line_no) + " has no pitch value");
    }
    if (columns.empty()) columns.resize(values.size());
    if (values.size() != columns.size()) {
      throw IoError(path + ": inconsistent column count at line " +
                    std::to_string(line_no));
    }
    for (std::size_t c = 0; c < values.size(); ++c) columns[c].push_back(values[c]);
  }
  if (columns.empty()) throw IoError(path + ": no pitch rows");
  return columns;
}

}  // namespace modgd
