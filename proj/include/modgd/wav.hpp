// include/modgd/wav.hpp
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

#include "modgd/types.hpp"

namespace modgd {

// Mono RIFF/WAVE, 16-bit PCM or 32-bit IEEE float. Samples normalized to
// [-1, 1] full scale.
SignalBuffer read_wav(const std::string& path);

// 16-bit PCM mono. Samples are clipped to [-1, 1].
void write_wav(const std::string& path, const SignalBuffer& signal);

}  // namespace modgd
