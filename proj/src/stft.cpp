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

#include "foamask/stft.hpp"

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

namespace foamask::stft {
namespace {

bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 complex FFT, double precision. Frame sizes are small
// powers of two so a direct implementation keeps the module dependency-free
// and bit-deterministic.
class Fft {
 public:
  explicit Fft(int n) : n_(n) {
    const int levels = log2i(n);
    rev_.resize(n);
    for (int i = 0; i < n; ++i) {
      uint32_t r = 0;
      for (int b = 0; b < levels; ++b) r |= ((i >> b) & 1u) << (levels - 1 - b);
      rev_[i] = r;
    }
    tw_.resize(n / 2);
    for (int k = 0; k < n / 2; ++k) {
      const double a = -2.0 * kPi * k / n;
      tw_[k] = {std::cos(a), std::sin(a)};
    }
  }

  void forward(std::complex<double>* x) const { run(x, false); }
  void inverse(std::complex<double>* x) const {
    run(x, true);
    const double inv = 1.0 / n_;
    for (int i = 0; i < n_; ++i) x[i] *= inv;
  }

 private:
  static int log2i(int n) {
    int l = 0;
    while ((1 << l) < n) ++l;
    return l;
  }

  void run(std::complex<double>* x, bool inv) const {
    for (int i = 0; i < n_; ++i) {
      const int j = rev_[i];
      if (j > i) std::swap(x[i], x[j]);
    }
    for (int len = 2; len <= n_; len <<= 1) {
      const int step = n_ / len;
      for (int i = 0; i < n_; i += len) {
        for (int k = 0; k < len / 2; ++k) {
          std::complex<double> w = tw_[static_cast<size_t>(k) * step];
          if (inv) w = std::conj(w);
          const std::complex<double> u = x[i + k];
          const std::complex<double> v = x[i + k + len / 2] * w;
          x[i + k] = u + v;
          x[i + k + len / 2] = u - v;
        }
      }
    }
  }

  int n_;
  std::vector<int> rev_;
  std::vector<std::complex<double>> tw_;
};

std::vector<double> make_window(int n) {
  std::vector<double> w(n);
  for (int i = 0; i < n; ++i) w[i] = std::sin(kPi * (i + 0.5) / n);
  return w;
}

}  // namespace

void StftConfig::validate() const {
  if (!is_pow2(frame_len) || frame_len < 16)
    throw ConfigError("stft: frame_len must be a power of two >= 16, got " +
                      std::to_string(frame_len));
  if (hop != frame_len / 2)
    throw ConfigError("stft: hop must equal frame_len/2 (50% overlap), got " +
                      std::to_string(hop));
  if (sample_rate <= 0) throw ConfigError("stft: sample_rate must be > 0");
}

Spectrogram::Spectrogram(const StftConfig& cfg, int c, int t)
    : config(cfg), channels(c), frames(t), bins(cfg.bins()) {
  config.validate();
  data.assign(static_cast<size_t>(c) * t * bins, {0.0f, 0.0f});
}

Spectrogram Spectrogram::channel(int c) const {
  Spectrogram out(config, 1, frames);
  std::copy(row(c, 0), row(c, 0) + static_cast<size_t>(frames) * bins,
            out.data.begin());
  return out;
}

int frame_count(std::size_t samples, const StftConfig& config) {
  if (samples < static_cast<std::size_t>(config.frame_len)) return 0;
  return static_cast<int>((samples - config.frame_len) / config.hop) + 1;
}

Spectrogram analyze(const Waveform& signal, const StftConfig& config) {
  config.validate();
  if (signal.empty()) throw DataError("stft: no channels");
  const std::size_t len = signal[0].size();
  for (const auto& ch : signal) {
    if (ch.size() != len) throw DataError("stft: channel lengths differ");
    for (float v : ch)
      if (!std::isfinite(v)) throw DataError("stft: non-finite sample");
  }
  const int frames = frame_count(len, config);
  if (frames <= 0)
    throw DataError("stft: signal shorter than one frame (" +
                    std::to_string(len) + " < " +
                    std::to_string(config.frame_len) + ")");

  const int n = config.frame_len;
  const int bins = config.bins();
  const Fft fft(n);
  const std::vector<double> window = make_window(n);

  Spectrogram spec(config, static_cast<int>(signal.size()), frames);
  std::vector<std::complex<double>> buf(n);
  for (int c = 0; c < spec.channels; ++c) {
    const float* x = signal[c].data();
    for (int t = 0; t < frames; ++t) {
      const float* frame = x + static_cast<size_t>(t) * config.hop;
      for (int i = 0; i < n; ++i) buf[i] = {window[i] * frame[i], 0.0};
      fft.forward(buf.data());
      std::complex<float>* out = spec.row(c, t);
      for (int f = 0; f < bins; ++f)
        out[f] = {static_cast<float>(buf[f].real()),
                  static_cast<float>(buf[f].imag())};
    }
  }
  return spec;
}

Spectrogram analyze(const Channel& mono, const StftConfig& config) {
  Waveform w(1);
  w[0] = mono;
  return analyze(w, config);
}

Waveform synthesize(const Spectrogram& spec) {
  spec.config.validate();
  if (spec.bins != spec.config.bins())
    throw DataError("stft: spectrogram bins inconsistent with config");
  if (spec.channels <= 0 || spec.frames <= 0)
    throw DataError("stft: empty spectrogram");

  const int n = spec.config.frame_len;
  const int hop = spec.config.hop;
  const int bins = spec.bins;
  const Fft fft(n);
  const std::vector<double> window = make_window(n);
  const std::size_t out_len =
      static_cast<std::size_t>(spec.frames - 1) * hop + n;

  Waveform out(spec.channels);
  std::vector<std::complex<double>> buf(n);
  std::vector<double> acc(out_len);
  for (int c = 0; c < spec.channels; ++c) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (int t = 0; t < spec.frames; ++t) {
      const std::complex<float>* in = spec.row(c, t);
      buf[0] = {static_cast<double>(in[0].real()), 0.0};
      buf[n / 2] = {static_cast<double>(in[n / 2].real()), 0.0};
      for (int f = 1; f < bins - 1; ++f) {
        const std::complex<double> v{in[f].real(), in[f].imag()};
        buf[f] = v;
        buf[n - f] = std::conj(v);
      }
      fft.inverse(buf.data());
      double* dst = acc.data() + static_cast<size_t>(t) * hop;
      for (int i = 0; i < n; ++i) dst[i] += window[i] * buf[i].real();
    }
    out[c].resize(out_len);
    for (std::size_t i = 0; i < out_len; ++i)
      out[c][i] = static_cast<float>(acc[i]);
  }
  return out;
}

Channel synthesize_mono(const Spectrogram& spec) {
  if (spec.channels != 1) throw DataError("stft: expected 1-channel");
  return synthesize(spec)[0];
}

Channel convolve(const Channel& x, const Channel& h) {
  if (x.empty() || h.empty()) return {};
  const std::size_t out_len = x.size() + h.size() - 1;
  int n = 1;
  while (static_cast<std::size_t>(n) < out_len) n <<= 1;
  Fft fft(n);
  std::vector<std::complex<double>> a(n), b(n);
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = {x[i], 0.0};
  for (std::size_t i = 0; i < h.size(); ++i) b[i] = {h[i], 0.0};
  fft.forward(a.data());
  fft.forward(b.data());
  for (int i = 0; i < n; ++i) a[i] *= b[i];
  fft.inverse(a.data());
  Channel out(out_len);
  for (std::size_t i = 0; i < out_len; ++i)
    out[i] = static_cast<float>(a[i].real());
  return out;
}

}  // namespace foamask::stft
