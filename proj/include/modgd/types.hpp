// include/modgd/types.hpp
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

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace modgd {

// Error hierarchy mapped onto CLI exit codes: UsageError -> 1,
// IoError -> 2, NumericError -> 3.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

struct NumericError : Error {
  using Error::Error;
};

// Mono sampled audio. The universal time-domain carrier.
struct SignalBuffer {
  std::vector<double> samples;
  int sample_rate = 0;  // Hz

  double duration_seconds() const {
    return sample_rate > 0
               ? static_cast<double>(samples.size()) / sample_rate
               : 0.0;
  }

  void validate() const {
    if (sample_rate <= 0) throw NumericError("sample_rate must be positive");
    for (double v : samples) {
      if (!std::isfinite(v)) throw NumericError("signal contains non-finite values");
    }
  }
};

}  // namespace modgd
