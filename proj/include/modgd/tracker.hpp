// include/modgd/tracker.hpp
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
// Frame-level pitch candidates -> two continuous per-speaker trajectories:
// high/low grouping (default), optional DP grouping, spectral-flux region
// labelling, stray removal and gap interpolation.

#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "modgd/pitch.hpp"
#include "modgd/types.hpp"

namespace modgd {

enum class TrackLabel { high, low };

struct PitchTrack {
  std::vector<double> f0;  // Hz per frame, 0 = unvoiced
  TrackLabel label = TrackLabel::low;

  bool voiced(std::size_t frame) const { return f0[frame] > 0.0; }
};

struct PostprocessConfig {
  double rho_hz = 10.0;        // stray threshold
  double max_gap_ms = 40.0;    // gaps at least this long stay unvoiced
  double flux_percentile = 25.0;
};

enum class RegionLabel { none, one, two };

// Per-frame candidate pairs -> (high, low) tracks. Frames with two
// candidates split by magnitude; a lone candidate goes to the track whose
// last voiced value is nearer (ties to high, no history at all to low).
std::pair<PitchTrack, PitchTrack> group_high_low(
    const std::vector<FramePitches>& per_frame);

// |L_j - L_{j-1}|
double transition_cost(double location, double prev_location);

// Minimum-total-transition-cost path through per-frame candidate sets,
// found by dynamic programming with backtracking. Ties break toward the
// lower-valued candidate. Every frame must offer at least one candidate.
std::vector<double> dp_group(const std::vector<std::vector<double>>& candidates);

// Label frames as silent, single-source or two-source from frame energy,
// spectral flux (soft threshold at a percentile of the utterance's flux)
// and the number of salient pitch candidates.
std::vector<RegionLabel> detect_single_or_silent(
    const std::vector<double>& flux, const std::vector<double>& energy,
    const std::vector<int>& n_candidates, const PostprocessConfig& cfg,
    double energy_floor);

// Stray interpolation and short-gap filling. Voiced values jumping more
// than rho from the previous voiced frame and returning within rho of it
// inside two frames are replaced by linear interpolation; unvoiced gaps
// shorter than max_gap_ms are filled the same way.
PitchTrack remove_strays(const PitchTrack& track, const PostprocessConfig& cfg,
                         double hop_ms);

// Linearly interpolated percentile (0..100) of a sample.
double percentile(std::vector<double> values, double pct);

}  // namespace modgd
