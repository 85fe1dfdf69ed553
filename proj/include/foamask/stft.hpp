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

#ifndef FOAMASK_STFT_HPP_
#define FOAMASK_STFT_HPP_

#include <complex>
#include <vector>

#include "foamask/common.hpp"

namespace foamask::stft {

// Analysis/synthesis framing: 50% overlapped frames weighted by the
// sinusoidal window w[n] = sin(pi*(n+0.5)/N) at both ends, which satisfies
// constant overlap-add. Frames lie fully inside the signal; no padding.
struct StftConfig {
  int frame_len = 1024;
  int hop = 512;
  int sample_rate = 16000;

  int bins() const { return frame_len / 2 + 1; }
  // Throws ConfigError unless frame_len is a power of two >= 16 and
  // hop == frame_len / 2.
  void validate() const;
};

// Complex time-frequency tensor, [channels][frames][bins] with the bin axis
// contiguous. One-sided spectrum, bins() == frame_len/2 + 1.
struct Spectrogram {
  StftConfig config;
  int channels = 0;
  int frames = 0;
  int bins = 0;
  std::vector<std::complex<float>> data;

  Spectrogram() = default;
  Spectrogram(const StftConfig& cfg, int c, int t);

  std::complex<float>* row(int c, int t) {
    return data.data() + (static_cast<size_t>(c) * frames + t) * bins;
  }
  const std::complex<float>* row(int c, int t) const {
    return data.data() + (static_cast<size_t>(c) * frames + t) * bins;
  }
  std::complex<float>& at(int c, int t, int f) { return row(c, t)[f]; }
  const std::complex<float>& at(int c, int t, int f) const {
    return row(c, t)[f];
  }

  // Extracts one channel as a 1-channel spectrogram.
  Spectrogram channel(int c) const;
  bool same_shape(const Spectrogram& other) const {
    return channels == other.channels && frames == other.frames &&
           bins == other.bins;
  }
};

// Number of frames analyze() will produce for a signal of the given length;
// 0 if the signal is shorter than one frame.
int frame_count(std::size_t samples, const StftConfig& config);

// Forward STFT of a multichannel signal. All channels must have equal length
// of at least frame_len; samples must be finite.
Spectrogram analyze(const Waveform& signal, const StftConfig& config);
Spectrogram analyze(const Channel& mono, const StftConfig& config);

// Weighted overlap-add inverse. Output length is (frames-1)*hop + frame_len.
// The first and last frame_len samples are edge-attenuated; the interior
// reproduces the input of analyze() to single-precision accuracy.
Waveform synthesize(const Spectrogram& spec);
Channel synthesize_mono(const Spectrogram& spec);

// FFT-based linear convolution, output length |x| + |h| - 1. Internally
// double precision; either input empty yields an empty result.
Channel convolve(const Channel& x, const Channel& h);

}  // namespace foamask::stft

#endif  // FOAMASK_STFT_HPP_
