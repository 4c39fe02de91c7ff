// src/kernels/kernels.cpp
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
// Runtime backend selection for the kernel set.

#include "modgd/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "modgd/types.hpp"

namespace modgd::kernels {

#if defined(__x86_64__) || defined(_M_X64)
const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp
#endif

const Ops* avx2_ops() {
#if defined(__x86_64__) || defined(_M_X64)
  if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
    return avx2_ops_impl();
  }
#endif
  return nullptr;
}

namespace {

const Ops* pick_default() {
  if (const char* env = std::getenv("MODGD_KERNELS")) {
    if (std::strcmp(env, "scalar") == 0) return &scalar_ops();
    if (std::strcmp(env, "avx2") == 0 && avx2_ops()) return avx2_ops();
  }
  if (const Ops* simd = avx2_ops()) return simd;
  return &scalar_ops();
}

const Ops*& active_slot() {
  static const Ops* slot = pick_default();
  return slot;
}

}  // namespace

const Ops& active() { return *active_slot(); }

void select(Backend backend) {
  switch (backend) {
    case Backend::auto_detect:
      active_slot() = pick_default();
      return;
    case Backend::scalar:
      active_slot() = &scalar_ops();
      return;
    case Backend::avx2:
      if (const Ops* simd = avx2_ops()) {
        active_slot() = simd;
        return;
      }
      throw NumericError("avx2 kernels unavailable on this CPU/build");
  }
  throw NumericError("unknown kernel backend");
}

std::string backend_name() { return active().name; }

}  // namespace modgd::kernels
