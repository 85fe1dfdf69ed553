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

#include "foamask/masks.hpp"

#include <string>

#include "foamask/kernels.hpp"

namespace foamask::masks {

Mask ideal_mask(const stft::Spectrogram& speech, const stft::Spectrogram& noise) {
  if (!speech.same_shape(noise))
    throw DataError("ideal_mask: speech/noise spectrogram shapes differ");
  Mask m(speech.frames, speech.bins);
  const std::size_t n = static_cast<std::size_t>(speech.frames) * speech.bins;
  // W channel only (channel 0)
  const std::complex<float>* s = speech.data.data();
  const std::complex<float>* v = noise.data.data();
  for (std::size_t i = 0; i < n; ++i) {
    const float se = s[i].real() * s[i].real() + s[i].imag() * s[i].imag();
    const float ne = v[i].real() * v[i].real() + v[i].imag() * v[i].imag();
    const float den = se + ne;
    m.data[i] = den > 0.0f ? se / den : 0.5f;
  }
  return m;
}

Mask complement(const Mask& m) {
  Mask out(m.frames, m.bins);
  for (std::size_t i = 0; i < m.data.size(); ++i) out.data[i] = 1.0f - m.data[i];
  return out;
}

stft::Spectrogram apply_mask(const stft::Spectrogram& x, const Mask& m) {
  if (x.frames != m.frames || x.bins != m.bins)
    throw DataError("apply_mask: mask " + std::to_string(m.frames) + "x" +
                    std::to_string(m.bins) + " does not match spectrogram " +
                    std::to_string(x.frames) + "x" + std::to_string(x.bins));
  stft::Spectrogram out = x;
  for (int c = 0; c < x.channels; ++c) {
    for (int t = 0; t < x.frames; ++t) {
      float* row = reinterpret_cast<float*>(out.row(c, t));
      kernels::crowscale_f32(row, m.row(t), row,
                             static_cast<std::size_t>(x.bins));
    }
  }
  return out;
}

}  // namespace foamask::masks
