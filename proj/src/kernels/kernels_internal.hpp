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

#ifndef FOAMASK_KERNELS_INTERNAL_HPP_
#define FOAMASK_KERNELS_INTERNAL_HPP_

#include <cstddef>

namespace foamask::kernels {

struct KernelTable {
  float (*dot_f32)(const float*, const float*, std::size_t);
  void (*axpy_f32)(float, const float*, float*, std::size_t);
  float (*sum_f32)(const float*, std::size_t);
  double (*sumsq_f32)(const float*, std::size_t);
  void (*cmag_f32)(const float*, float*, std::size_t);
  void (*crowscale_f32)(const float*, const float*, float*, std::size_t);
  void (*caxpy_f32)(float, float, const float*, float*, std::size_t);
  void (*cmac_conj_f32)(const float*, const float*, float*, std::size_t);
  void (*wouter_accum_f32)(const float*, const float*, const float*, double*,
                           double*, std::size_t);
};

const KernelTable& scalar_table();

#if defined(FOAMASK_HAVE_AVX2)
const KernelTable& avx2_table();
#endif

}  // namespace foamask::kernels

#endif  // FOAMASK_KERNELS_INTERNAL_HPP_
