// include/modgd/pipeline.hpp
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
// Whole-utterance estimation: framing, two-pass per-frame pitch
// extraction, region labelling, grouping and post-processing.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "modgd/pitch.hpp"
#include "modgd/smcc.hpp"
#include "modgd/tracker.hpp"
#include "modgd/types.hpp"

namespace modgd {

enum class GroupingMode { high_low, dynamic_programming };

struct PipelineConfig {
  FrameConfig frame{30.0, 10.0, WindowKind::hamming};
  PitchEngineConfig engine;
  PostprocessConfig postprocess;
  GroupingMode grouping = GroupingMode::high_low;
  SmccConfig smcc;
  std::size_t gmm_components = 12;
  std::size_t gmm_max_iter = 50;
  std::uint64_t seed = 1;
};

struct UtteranceEstimate {
  PitchTrack high;  // written as track 2
  PitchTrack low;   // written as track 1
  std::vector<FramePitches> per_frame;
  std::vector<RegionLabel> labels;
  std::vector<double> flux;
  std::vector<double> energy;
  double hop_ms = 10.0;
};

UtteranceEstimate estimate_utterance(const SignalBuffer& signal,
                                     const PipelineConfig& cfg);

// Write the per-frame intermediates of an estimate run into a directory:
// flattened.txt, modgd_pass1.txt, modgd_pass2.txt (one row per frame),
// peaks.txt, flux.txt and trajectories.txt.
struct DumpOptions {
  std::string directory;
};

UtteranceEstimate estimate_utterance_dumped(const SignalBuffer& signal,
                                            const PipelineConfig& cfg,
                                            const DumpOptions& dump);

}  // namespace modgd
