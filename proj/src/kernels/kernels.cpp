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

#include "foamask/kernels.hpp"

#include <cstdlib>
#include <cstring>

#include "kernels_internal.hpp"

namespace foamask::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(FOAMASK_HAVE_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

struct Dispatch {
  const KernelTable* table;
  Backend backend;

  Dispatch() { auto_select(); }

  void auto_select() {
    Backend wanted = cpu_has_avx2() ? Backend::kAvx2 : Backend::kScalar;
    if (const char* env = std::getenv("FOAMASK_KERNELS")) {
      if (std::strcmp(env, "scalar") == 0) wanted = Backend::kScalar;
      if (std::strcmp(env, "avx2") == 0 && cpu_has_avx2())
        wanted = Backend::kAvx2;
    }
    select(wanted);
  }

  void select(Backend b) {
    backend = b;
#if defined(FOAMASK_HAVE_AVX2)
    table = (b == Backend::kAvx2) ? &avx2_table() : &scalar_table();
#else
    table = &scalar_table();
#endif
  }
};

Dispatch& dispatch() {
  static Dispatch d;
  return d;
}

}  // namespace

const char* backend_name(Backend b) {
  return b == Backend::kAvx2 ? "avx2" : "scalar";
}

Backend active_backend() { return dispatch().backend; }

bool backend_supported(Backend b) {
  return b == Backend::kScalar || cpu_has_avx2();
}

bool set_backend(Backend b) {
  if (!backend_supported(b)) return false;
  dispatch().select(b);
  return true;
}

void reset_backend() { dispatch().auto_select(); }

float dot_f32(const float* a, const float* b, std::size_t n) {
  return dispatch().table->dot_f32(a, b, n);
}

void axpy_f32(float alpha, const float* x, float* y, std::size_t n) {
  dispatch().table->axpy_f32(alpha, x, y, n);
}

float sum_f32(const float* x, std::size_t n) {
  return dispatch().table->sum_f32(x, n);
}

double sumsq_f32(const float* x, std::size_t n) {
  return dispatch().table->sumsq_f32(x, n);
}

void cmag_f32(const float* x, float* out, std::size_t n) {
  dispatch().table->cmag_f32(x, out, n);
}

void crowscale_f32(const float* x, const float* gains, float* y,
                   std::size_t n) {
  dispatch().table->crowscale_f32(x, gains, y, n);
}

void caxpy_f32(float ar, float ai, const float* x, float* y, std::size_t n) {
  dispatch().table->caxpy_f32(ar, ai, x, y, n);
}

void cmac_conj_f32(const float* w, const float* x, float* y, std::size_t n) {
  dispatch().table->cmac_conj_f32(w, x, y, n);
}

void wouter_accum_f32(const float* xi, const float* xj, const float* w,
                      double* acc_re, double* acc_im, std::size_t n) {
  dispatch().table->wouter_accum_f32(xi, xj, w, acc_re, acc_im, n);
}

}  // namespace foamask::kernels
