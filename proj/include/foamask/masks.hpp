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

#ifndef FOAMASK_MASKS_HPP_
#define FOAMASK_MASKS_HPP_

#include <vector>

#include "foamask/common.hpp"
#include "foamask/stft.hpp"

namespace foamask::masks {

// Time-frequency ratio mask, values in [0, 1], row-major [frame][bin].
struct Mask {
  int frames = 0;
  int bins = 0;
  std::vector<float> data;

  Mask() = default;
  Mask(int t, int f) : frames(t), bins(f), data(static_cast<std::size_t>(t) * f, 0.0f) {}

  float& at(int t, int f) { return data[static_cast<std::size_t>(t) * bins + f]; }
  float at(int t, int f) const { return data[static_cast<std::size_t>(t) * bins + f]; }
  float* row(int t) { return data.data() + static_cast<std::size_t>(t) * bins; }
  const float* row(int t) const { return data.data() + static_cast<std::size_t>(t) * bins; }

  bool same_shape(const Mask& o) const { return frames == o.frames && bins == o.bins; }
};

// Speech ratio mask from reference W channels: |s|^2 / (|s|^2 + |n|^2).
// Bins where both magnitudes vanish get 0.5 (no evidence either way).
Mask ideal_mask(const stft::Spectrogram& speech, const stft::Spectrogram& noise);

// 1 - m, elementwise.
Mask complement(const Mask& m);

// Scale every channel of x by the mask. Shapes must agree.
stft::Spectrogram apply_mask(const stft::Spectrogram& x, const Mask& m);

}  // namespace foamask::masks

#endif  // FOAMASK_MASKS_HPP_
