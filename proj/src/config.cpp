// src/config.cpp
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

#include "modgd/config.hpp"

#include <fstream>
#include <sstream>

namespace modgd {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw UsageError("config: bad numeric value for " + key + ": " + value);
  }
}

std::size_t parse_size(const std::string& key, const std::string& value) {
  const double v = parse_double(key, value);
  if (v < 0.0) throw UsageError("config: " + key + " must be non-negative");
  return static_cast<std::size_t>(v);
}

}  // namespace

PipelineConfig parse_config_text(const std::string& text, PipelineConfig cfg) {
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
      throw UsageError("config line " + std::to_string(line_no) +
                       ": expected key=value");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (key == "frame_ms") {
      cfg.frame.frame_len_ms = parse_double(key, value);
    } else if (key == "hop_ms") {
      cfg.frame.hop_ms = parse_double(key, value);
    } else if (key == "window") {
      if (value == "hamming") {
        cfg.frame.window = WindowKind::hamming;
      } else if (value == "rectangular") {
        cfg.frame.window = WindowKind::rectangular;
      } else {
        throw UsageError("config: window must be hamming|rectangular");
      }
    } else if (key == "n_fft") {
      cfg.engine.n_fft = parse_size(key, value);
    } else if (key == "flatten_lifter") {
      cfg.engine.flatten_lifter = parse_size(key, value);
    } else if (key == "flatten_gamma") {
      cfg.engine.flatten_gamma = parse_double(key, value);
    } else if (key == "modgd_alpha") {
      cfg.engine.modgd.alpha = parse_double(key, value);
    } else if (key == "modgd_gamma") {
      cfg.engine.modgd.gamma = parse_double(key, value);
    } else if (key == "modgd_lifter") {
      cfg.engine.modgd.lifter_len = parse_size(key, value);
    } else if (key == "fmin_hz") {
      cfg.engine.range.f_min = parse_double(key, value);
    } else if (key == "fmax_hz") {
      cfg.engine.range.f_max = parse_double(key, value);
    } else if (key == "comb_alpha") {
      cfg.engine.comb_alpha = parse_double(key, value);
    } else if (key == "salience_rel") {
      cfg.engine.salience_rel = parse_double(key, value);
    } else if (key == "voicing_min") {
      cfg.engine.voicing_min = parse_double(key, value);
    } else if (key == "voicing_min_second") {
      cfg.engine.voicing_min_second = parse_double(key, value);
    } else if (key == "octave_ratio") {
      cfg.engine.octave_ratio = parse_double(key, value);
    } else if (key == "silence_rms") {
      cfg.engine.silence_rms = parse_double(key, value);
    } else if (key == "second_pass_exclusion_bins") {
      cfg.engine.second_pass_exclusion_bins = parse_double(key, value);
    } else if (key == "rho_hz") {
      cfg.postprocess.rho_hz = parse_double(key, value);
    } else if (key == "max_gap_ms") {
      cfg.postprocess.max_gap_ms = parse_double(key, value);
    } else if (key == "flux_percentile") {
      cfg.postprocess.flux_percentile = parse_double(key, value);
    } else if (key == "grouping") {
      if (value == "highlow") {
        cfg.grouping = GroupingMode::high_low;
      } else if (value == "dp") {
        cfg.grouping = GroupingMode::dynamic_programming;
      } else {
        throw UsageError("config: grouping must be highlow|dp");
      }
    } else if (key == "smcc_frame_ms") {
      cfg.smcc.frame.frame_len_ms = parse_double(key, value);
    } else if (key == "smcc_hop_ms") {
      cfg.smcc.frame.hop_ms = parse_double(key, value);
    } else if (key == "smcc_coeffs") {
      cfg.smcc.n_coeffs = parse_size(key, value);
    } else if (key == "smcc_filters") {
      cfg.smcc.n_filters = parse_size(key, value);
    } else if (key == "gmm_components") {
      cfg.gmm_components = parse_size(key, value);
    } else if (key == "gmm_max_iter") {
      cfg.gmm_max_iter = parse_size(key, value);
    } else if (key == "seed") {
      cfg.seed = static_cast<std::uint64_t>(parse_double(key, value));
    } else {
      throw UsageError("config: unknown key: " + key);
    }
  }
  return cfg;
}

PipelineConfig load_config(const std::string& path, PipelineConfig base) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::move(base));
}

std::string config_to_text(const PipelineConfig& cfg) {
  std::ostringstream out;
  out << "frame_ms = " << cfg.frame.frame_len_ms << "\n";
  out << "hop_ms = " << cfg.frame.hop_ms << "\n";
  out << "window = "
      << (cfg.frame.window == WindowKind::hamming ? "hamming" : "rectangular")
      << "\n";
  out << "n_fft = " << cfg.engine.n_fft << "\n";
  out << "flatten_lifter = " << cfg.engine.flatten_lifter << "\n";
  out << "flatten_gamma = " << cfg.engine.flatten_gamma << "\n";
  out << "modgd_alpha = " << cfg.engine.modgd.alpha << "\n";
  out << "modgd_gamma = " << cfg.engine.modgd.gamma << "\n";
  out << "modgd_lifter = " << cfg.engine.modgd.lifter_len << "\n";
  out << "fmin_hz = " << cfg.engine.range.f_min << "\n";
  out << "fmax_hz = " << cfg.engine.range.f_max << "\n";
  out << "comb_alpha = " << cfg.engine.comb_alpha << "\n";
  out << "salience_rel = " << cfg.engine.salience_rel << "\n";
  out << "voicing_min = " << cfg.engine.voicing_min << "\n";
  out << "voicing_min_second = " << cfg.engine.voicing_min_second << "\n";
  out << "octave_ratio = " << cfg.engine.octave_ratio << "\n";
  out << "silence_rms = " << cfg.engine.silence_rms << "\n";
  out << "second_pass_exclusion_bins = " << cfg.engine.second_pass_exclusion_bins
      << "\n";
  out << "rho_hz = " << cfg.postprocess.rho_hz << "\n";
  out << "max_gap_ms = " << cfg.postprocess.max_gap_ms << "\n";
  out << "flux_percentile = " << cfg.postprocess.flux_percentile << "\n";
  out << "grouping = "
      << (cfg.grouping == GroupingMode::high_low ? "highlow" : "dp") << "\n";
  out << "smcc_frame_ms = " << cfg.smcc.frame.frame_len_ms << "\n";
  out << "smcc_hop_ms = " << cfg.smcc.frame.hop_ms << "\n";
  out << "smcc_coeffs = " << cfg.smcc.n_coeffs << "\n";
  out << "smcc_filters = " << cfg.smcc.n_filters << "\n";
  out << "gmm_components = " << cfg.gmm_components << "\n";
  out << "gmm_max_iter = " << cfg.gmm_max_iter << "\n";
  out << "seed = " << cfg.seed << "\n";
  return out.str();
}

}  // namespace modgd
