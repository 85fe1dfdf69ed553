// Copyright 2026 The foamask Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// AVX2/FMA kernel variants. This file is compiled with -mavx2 -mfma and only
// reached after the runtime CPU check in the dispatcher.

#include "kernels_internal.hpp"

#if defined(FOAMASK_HAVE_AVX2)

#include <immintrin.h>

#include <cmath>
#include <cstddef>

namespace foamask::kernels {
namespace {

inline float hsum(__m256 v) {
  __m128 lo = _mm256_castps256_ps128(v);
  __m128 hi = _mm256_extractf128_ps(v, 1);
  lo = _mm_add_ps(lo, hi);
  lo = _mm_add_ps(lo, _mm_movehl_ps(lo, lo));
  lo = _mm_add_ss(lo, _mm_movehdup_ps(lo));
  return _mm_cvtss_f32(lo);
}

inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(lo) + _mm_cvtsd_f64(_mm_unpackhi_pd(lo, lo));
}

float dot_avx2(const float* a, const float* b, std::size_t n) {
  __m256 acc0 = _mm256_setzero_ps();
  __m256 acc1 = _mm256_setzero_ps();
  std::size_t k = 0;
  for (; k + 16 <= n; k += 16) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + k), _mm256_loadu_ps(b + k),
                           acc0);
    acc1 = _mm256_fmadd_ps(_mm256_loadu_ps(a + k + 8),
                           _mm256_loadu_ps(b + k + 8), acc1);
  }
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_ps(_mm256_loadu_ps(a + k), _mm256_loadu_ps(b + k),
                           acc0);
  }
  float acc = hsum(_mm256_add_ps(acc0, acc1));
  for (; k < n; ++k) acc += a[k] * b[k];
  return acc;
}

void axpy_avx2(float alpha, const float* x, float* y, std::size_t n) {
  const __m256 va = _mm256_set1_ps(alpha);
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    __m256 vy = _mm256_loadu_ps(y + k);
    vy = _mm256_fmadd_ps(va, _mm256_loadu_ps(x + k), vy);
    _mm256_storeu_ps(y + k, vy);
  }
  for (; k < n; ++k) y[k] += alpha * x[k];
}

float sum_avx2(const float* x, std::size_t n) {
  __m256 acc = _mm256_setzero_ps();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + k));
  float s = hsum(acc);
  for (; k < n; ++k) s += x[k];
  return s;
}

double sumsq_avx2(const float* x, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256 v = _mm256_loadu_ps(x + k);
    const __m256d lo = _mm256_cvtps_pd(_mm256_castps256_ps128(v));
    const __m256d hi = _mm256_cvtps_pd(_mm256_extractf128_ps(v, 1));
    acc0 = _mm256_fmadd_pd(lo, lo, acc0);
    acc1 = _mm256_fmadd_pd(hi, hi, acc1);
  }
  double s = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) {
    const double v = x[k];
    s += v * v;
  }
  return s;
}

void cmag_avx2(const float* x, float* out, std::size_t n) {
  const __m256i order = _mm256_setr_epi32(0, 1, 4, 5, 2, 3, 6, 7);
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256 a = _mm256_loadu_ps(x + 2 * k);
    const __m256 b = _mm256_loadu_ps(x + 2 * k + 8);
    // hadd of the squared pairs yields [m0 m1 m4 m5 | m2 m3 m6 m7]
    __m256 m = _mm256_hadd_ps(_mm256_mul_ps(a, a), _mm256_mul_ps(b, b));
    m = _mm256_permutevar8x32_ps(m, order);
    _mm256_storeu_ps(out + k, _mm256_sqrt_ps(m));
  }
  for (; k < n; ++k) {
    const float re = x[2 * k];
    const float im = x[2 * k + 1];
    out[k] = std::sqrt(re * re + im * im);
  }
}

void crowscale_avx2(const float* x, const float* gains, float* y,
                    std::size_t n) {
  const __m256i dup_lo = _mm256_setr_epi32(0, 0, 1, 1, 2, 2, 3, 3);
  const __m256i dup_hi = _mm256_setr_epi32(4, 4, 5, 5, 6, 6, 7, 7);
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    const __m256 g = _mm256_loadu_ps(gains + k);
    const __m256 glo = _mm256_permutevar8x32_ps(g, dup_lo);
    const __m256 ghi = _mm256_permutevar8x32_ps(g, dup_hi);
    _mm256_storeu_ps(y + 2 * k,
                     _mm256_mul_ps(glo, _mm256_loadu_ps(x + 2 * k)));
    _mm256_storeu_ps(y + 2 * k + 8,
                     _mm256_mul_ps(ghi, _mm256_loadu_ps(x + 2 * k + 8)));
  }
  for (; k < n; ++k) {
    y[2 * k] = gains[k] * x[2 * k];
    y[2 * k + 1] = gains[k] * x[2 * k + 1];
  }
}

void caxpy_avx2(float ar, float ai, const float* x, float* y, std::size_t n) {
  const __m256 var = _mm256_set1_ps(ar);
  // pattern (-ai, +ai): pairs with the (im, re) swap below
  const __m256 vai = _mm256_setr_ps(-ai, ai, -ai, ai, -ai, ai, -ai, ai);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256 vx = _mm256_loadu_ps(x + 2 * k);
    const __m256 sw = _mm256_permute_ps(vx, 0xB1);  // (im, re) per pair
    __m256 vy = _mm256_loadu_ps(y + 2 * k);
    vy = _mm256_fmadd_ps(var, vx, vy);
    vy = _mm256_fmadd_ps(vai, sw, vy);
    _mm256_storeu_ps(y + 2 * k, vy);
  }
  for (; k < n; ++k) {
    const float re = x[2 * k];
    const float im = x[2 * k + 1];
    y[2 * k] += ar * re - ai * im;
    y[2 * k + 1] += ar * im + ai * re;
  }
}

void cmac_conj_avx2(const float* w, const float* x, float* y, std::size_t n) {
  const __m256 negodd = _mm256_setr_ps(0.0f, -0.0f, 0.0f, -0.0f, 0.0f, -0.0f,
                                       0.0f, -0.0f);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256 vw = _mm256_loadu_ps(w + 2 * k);
    const __m256 vx = _mm256_loadu_ps(x + 2 * k);
    const __m256 wr = _mm256_moveldup_ps(vw);
    const __m256 wi = _mm256_movehdup_ps(vw);
    // (xi, -xr) per pair
    const __m256 sw =
        _mm256_xor_ps(_mm256_permute_ps(vx, 0xB1), negodd);
    __m256 vy = _mm256_loadu_ps(y + 2 * k);
    vy = _mm256_fmadd_ps(wr, vx, vy);
    vy = _mm256_fmadd_ps(wi, sw, vy);
    _mm256_storeu_ps(y + 2 * k, vy);
  }
  for (; k < n; ++k) {
    const float wr = w[2 * k];
    const float wi = w[2 * k + 1];
    const float xr = x[2 * k];
    const float xi = x[2 * k + 1];
    y[2 * k] += wr * xr + wi * xi;
    y[2 * k + 1] += wr * xi - wi * xr;
  }
}

void wouter_accum_avx2(const float* xi, const float* xj, const float* w,
                       double* acc_re, double* acc_im, std::size_t n) {
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256 a8 = _mm256_loadu_ps(xi + 2 * k);
    const __m256 b8 = _mm256_loadu_ps(xj + 2 * k);
    const __m256d a_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(a8));
    const __m256d a_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(a8, 1));
    const __m256d b_lo = _mm256_cvtps_pd(_mm256_castps256_ps128(b8));
    const __m256d b_hi = _mm256_cvtps_pd(_mm256_extractf128_ps(b8, 1));
    // re = ar*br + ai*bi, pair-summed; lanes come out [0 2 1 3]
    __m256d re = _mm256_hadd_pd(_mm256_mul_pd(a_lo, b_lo),
                                _mm256_mul_pd(a_hi, b_hi));
    re = _mm256_permute4x64_pd(re, _MM_SHUFFLE(3, 1, 2, 0));
    // im = ai*br - ar*bi via the (ai, ar) swap
    const __m256d as_lo = _mm256_permute_pd(a_lo, 0x5);
    const __m256d as_hi = _mm256_permute_pd(a_hi, 0x5);
    __m256d im = _mm256_hsub_pd(_mm256_mul_pd(as_lo, b_lo),
                                _mm256_mul_pd(as_hi, b_hi));
    im = _mm256_permute4x64_pd(im, _MM_SHUFFLE(3, 1, 2, 0));
    const __m256d vw = _mm256_cvtps_pd(_mm_loadu_ps(w + k));
    _mm256_storeu_pd(acc_re + k,
                     _mm256_fmadd_pd(vw, re, _mm256_loadu_pd(acc_re + k)));
    _mm256_storeu_pd(acc_im + k,
                     _mm256_fmadd_pd(vw, im, _mm256_loadu_pd(acc_im + k)));
  }
  for (; k < n; ++k) {
    const double ar = xi[2 * k];
    const double ai = xi[2 * k + 1];
    const double br = xj[2 * k];
    const double bi = xj[2 * k + 1];
    const double wk = w[k];
    acc_re[k] += wk * (ar * br + ai * bi);
    acc_im[k] += wk * (ai * br - ar * bi);
  }
}

}  // namespace

const KernelTable& avx2_table() {
  static const KernelTable table = {
      dot_avx2,   axpy_avx2,      sum_avx2,
      sumsq_avx2, cmag_avx2,      crowscale_avx2,
      caxpy_avx2, cmac_conj_avx2, wouter_accum_avx2,
  };
  return table;
}

}  // namespace foamask::kernels

#endif  // FOAMASK_HAVE_AVX2
