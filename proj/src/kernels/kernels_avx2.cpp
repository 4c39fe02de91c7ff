// src/kernels/kernels_avx2.cpp
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
// AVX2/FMA kernels, 4 doubles per vector. This translation unit is compiled
// with -mavx2 -mfma; callers must gate on runtime CPU support (see
// kernels.cpp). Reductions use 4-lane accumulators and therefore reassociate
// relative to the scalar reference.

#include "modgd/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <complex>
#include <cstddef>

namespace modgd::kernels {

namespace {

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d shuf = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, shuf));
}

void multiply_avx2(const double* a, const double* b, double* out, std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(a + i),
                                            _mm256_loadu_pd(b + i)));
  }
  for (; i < n; ++i) out[i] = a[i] * b[i];
}

void scale_avx2(const double* x, double c, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_mul_pd(_mm256_loadu_pd(x + i), vc));
  }
  for (; i < n; ++i) out[i] = x[i] * c;
}

void add_scalar_avx2(const double* x, double c, double* out, std::size_t n) {
  const __m256d vc = _mm256_set1_pd(c);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_loadu_pd(x + i), vc));
  }
  for (; i < n; ++i) out[i] = x[i] + c;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d vy = _mm256_loadu_pd(y + i);
    vy = _mm256_fmadd_pd(va, _mm256_loadu_pd(x + i), vy);
    _mm256_storeu_pd(y + i, vy);
  }
  for (; i < n; ++i) y[i] += a * x[i];
}

void complex_dot_real_avx2(const std::complex<double>* x,
                           const std::complex<double>* y, double* out,
                           std::size_t n) {
  const double* xd = reinterpret_cast<const double*>(x);
  const double* yd = reinterpret_cast<const double*>(y);
  std::size_t i = 0;
  // Four complex values per iteration: two ymm loads of (re, im) pairs.
  for (; i + 4 <= n; i += 4) {
    __m256d p01 = _mm256_mul_pd(_mm256_loadu_pd(xd + 2 * i),
                                _mm256_loadu_pd(yd + 2 * i));
    __m256d p23 = _mm256_mul_pd(_mm256_loadu_pd(xd + 2 * i + 4),
                                _mm256_loadu_pd(yd + 2 * i + 4));
    // hadd yields (s0, s2, s1, s3); permute back to (s0, s1, s2, s3).
    __m256d sums = _mm256_hadd_pd(p01, p23);
    sums = _mm256_permute4x64_pd(sums, 0xD8);
    _mm256_storeu_pd(out + i, sums);
  }
  for (; i < n; ++i) {
    out[i] = x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
  }
}

void comb_fir_avx2(const double* x, double* y, std::size_t n, std::size_t d,
                   double alpha) {
  const std::size_t head = d < n ? d : n;
  for (std::size_t i = 0; i < head; ++i) y[i] = x[i];
  const __m256d va = _mm256_set1_pd(alpha);
  std::size_t i = head;
  for (; i + 4 <= n; i += 4) {
    __m256d cur = _mm256_loadu_pd(x + i);
    __m256d del = _mm256_loadu_pd(x + i - d);
    _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, del, cur));
  }
  for (; i < n; ++i) y[i] = x[i] + alpha * x[i - d];
}

double sum_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) acc = _mm256_add_pd(acc, _mm256_loadu_pd(x + i));
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i];
  return total;
}

double sum_sq_avx2(const double* x, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_loadu_pd(x + i);
    acc = _mm256_fmadd_pd(v, v, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) total += x[i] * x[i];
  return total;
}

double sum_sq_diff_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
    acc = _mm256_fmadd_pd(d, d, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    double d = a[i] - b[i];
    total += d * d;
  }
  return total;
}

double weighted_sq_dist_avx2(const double* x, const double* m, const double* w,
                             std::size_t n) {
  __m256d acc = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), _mm256_loadu_pd(m + i));
    __m256d wd = _mm256_mul_pd(_mm256_loadu_pd(w + i), d);
    acc = _mm256_fmadd_pd(wd, d, acc);
  }
  double total = hsum(acc);
  for (; i < n; ++i) {
    double d = x[i] - m[i];
    total += w[i] * d * d;
  }
  return total;
}

}  // namespace

const Ops* avx2_ops_impl() {
  static const Ops ops = {
      "avx2",
      multiply_avx2,
      scale_avx2,
      add_scalar_avx2,
      axpy_avx2,
      complex_dot_real_avx2,
      comb_fir_avx2,
      sum_avx2,
      sum_sq_avx2,
      sum_sq_diff_avx2,
      weighted_sq_dist_avx2,
  };
  return &ops;
}

}  // namespace modgd::kernels

#endif  // x86-64
