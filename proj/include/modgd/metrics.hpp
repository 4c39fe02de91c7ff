// include/modgd/metrics.hpp
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
// Scoring detected trajectories against references, voiced frames only.

#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "modgd/tracker.hpp"
#include "modgd/types.hpp"

namespace modgd {

struct EvalReport {
  double accuracy_10 = 0.0;      // percent
  double accuracy_20 = 0.0;      // percent
  double mean_fine_error = 0.0;  // e, Hz, over the 10%-correct frames
  double e_fs = 0.0;             // sigma_e, Hz
  std::size_t n_voiced = 0;      // reference voiced frames scored
  std::size_t n_correct_10 = 0;  // frames inside the 10% threshold
};

// Percentage of reference-voiced frames whose detected pitch deviates less
// than pct_threshold percent. A detected-unvoiced frame counts as a miss;
// detected-voiced/reference-unvoiced frames are not scored at all.
double accuracy(const std::vector<double>& det, const std::vector<double>& ref,
                double pct_threshold);

// Mean fine error e and its standard deviation sigma_e over the frames that
// are correct at pct_threshold (errors taken as reference minus detected).
struct FineStats {
  double mean_error = 0.0;
  double sigma_e = 0.0;
  std::size_t n_correct = 0;
};
FineStats fine_pitch_stats(const std::vector<double>& det,
                           const std::vector<double>& ref,
                           double pct_threshold = 10.0);

// Score two detected tracks against two references: pick the assignment
// with the smaller summed mean absolute voiced-frame error, then report per
// reference speaker. Invariant under swapping the detected tracks.
std::array<EvalReport, 2> score_pair(const PitchTrack& det_a,
                                     const PitchTrack& det_b,
                                     const std::vector<double>& ref_1,
                                     const std::vector<double>& ref_2);

EvalReport score_single(const std::vector<double>& det,
                        const std::vector<double>& ref);

}  // namespace modgd
