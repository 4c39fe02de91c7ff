// include/modgd/config.hpp
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

#pragma once

#include <string>

#include "modgd/pipeline.hpp"

namespace modgd {

// Flat key=value configuration; '#' starts a comment. Unknown keys are
// rejected. Every key has a default, so an empty file is valid.
PipelineConfig parse_config_text(const std::string& text,
                                 PipelineConfig base = PipelineConfig{});
PipelineConfig load_config(const std::string& path,
                           PipelineConfig base = PipelineConfig{});

// One key=value line per setting, suitable for load_config.
std::string config_to_text(const PipelineConfig& cfg);

}  // namespace modgd
