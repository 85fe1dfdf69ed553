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

#include "foamask/signal.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "foamask/rng.hpp"

namespace foamask::signal {
namespace {

struct Formant {
  double center_hz;
  double bandwidth_hz;
  double gain;
};

double formant_gain(const std::vector<Formant>& formants, double hz) {
  double g = 0.15;  // spectral floor so high harmonics never vanish
  for (const auto& f : formants) {
    const double d = (hz - f.center_hz) / f.bandwidth_hz;
    g += f.gain / (1.0 + d * d);
  }
  return g;
}

// Raised-cosine syllable envelope: value in [0, 1], rises and falls over
// attack/release fractions of the syllable length.
double syllable_env(double pos, double len, double edge) {
  if (pos < 0.0 || pos >= len) return 0.0;
  const double ramp = len * edge;
  double g = 1.0;
  if (pos < ramp) g = 0.5 - 0.5 * std::cos(kPi * pos / ramp);
  const double tail = len - pos;
  if (tail < ramp) g = std::min(g, 0.5 - 0.5 * std::cos(kPi * tail / ramp));
  return g;
}

void normalize_rms(Channel& x, double target) {
  double acc = 0.0;
  for (float v : x) acc += double(v) * double(v);
  if (acc <= 0.0) return;
  const double scale = target / std::sqrt(acc / double(x.size()));
  for (float& v : x) v = float(double(v) * scale);
}

std::vector<Formant> draw_formants(Rng& rng) {
  return {
      {rng.uniform(350.0, 850.0), 160.0, 1.0},
      {rng.uniform(900.0, 1800.0), 220.0, 0.7},
      {rng.uniform(2000.0, 3200.0), 300.0, 0.4},
  };
}

void add_voiced(Channel& out, size_t start, size_t len, int sample_rate,
                double f0_start, double f0_end, double vibrato_hz,
                const std::vector<Formant>& formants, Rng& rng) {
  const int harmonics = int(0.45 * sample_rate / std::max(f0_start, f0_end));
  std::vector<double> amp(size_t(std::max(harmonics, 1)));
  std::vector<double> phase(amp.size());
  for (size_t h = 0; h < amp.size(); ++h) {
    const double hz = (double(h) + 1.0) * 0.5 * (f0_start + f0_end);
    amp[h] = formant_gain(formants, hz) / (double(h) + 1.0);
    phase[h] = rng.uniform(0.0, 2.0 * kPi);
  }
  double carrier = 0.0;  // integrated instantaneous f0 in cycles
  const double vib_phase = rng.uniform(0.0, 2.0 * kPi);
  for (size_t i = 0; i < len && start + i < out.size(); ++i) {
    const double t = double(i) / double(sample_rate);
    const double frac = double(i) / double(len);
    const double f0 =
        (f0_start + (f0_end - f0_start) * frac) *
        (1.0 + 0.025 * std::sin(2.0 * kPi * vibrato_hz * t + vib_phase));
    carrier += f0 / double(sample_rate);
    const double env = syllable_env(double(i), double(len), 0.18);
    double s = 0.0;
    for (size_t h = 0; h < amp.size(); ++h) {
      s += amp[h] * std::sin(2.0 * kPi * (double(h) + 1.0) * carrier + phase[h]);
    }
    out[start + i] += float(env * s);
  }
}

void add_fricative(Channel& out, size_t start, size_t len, Rng& rng) {
  float prev = 0.0f;
  for (size_t i = 0; i < len && start + i < out.size(); ++i) {
    const float white = float(rng.gaussian());
    const float high = white - prev;  // first difference tilts toward treble
    prev = white;
    const double env = syllable_env(double(i), double(len), 0.3);
    out[start + i] += float(0.22 * env * high);
  }
}

}  // namespace

Channel harmonic_voiced(double seconds, int sample_rate, double f0_hz,
                        uint64_t seed) {
  if (seconds <= 0.0 || sample_rate <= 0 || f0_hz <= 0.0 ||
      f0_hz >= 0.5 * sample_rate) {
    throw ConfigError("harmonic_voiced: invalid duration, rate, or pitch");
  }
  Rng rng(seed);
  const size_t n = size_t(seconds * sample_rate);
  Channel out(n, 0.0f);
  const auto formants = draw_formants(rng);
  const size_t syllable = size_t(0.28 * sample_rate);
  const size_t gap = size_t(0.06 * sample_rate);
  size_t pos = 0;
  while (pos < n) {
    const size_t len = std::min(syllable, n - pos);
    add_voiced(out, pos, len, sample_rate, f0_hz, f0_hz, 0.0, formants, rng);
    pos += syllable + gap;
  }
  normalize_rms(out, 0.1);
  return out;
}

Channel speech_like(double seconds, int sample_rate, uint64_t seed) {
  if (seconds <= 0.0 || sample_rate <= 0) {
    throw ConfigError("speech_like: invalid duration or sample rate");
  }
  Rng rng(seed);
  const size_t n = size_t(seconds * sample_rate);
  Channel out(n, 0.0f);
  const auto formants = draw_formants(rng);
  const double f0_base = rng.uniform(95.0, 230.0);
  double f0 = f0_base;
  size_t pos = size_t(rng.uniform(0.0, 0.04) * sample_rate);
  while (pos < n) {
    const double u = rng.uniform();
    if (u < 0.72) {  // voiced syllable with a pitch glide
      const double len_s = rng.uniform(0.12, 0.35);
      const size_t len = size_t(len_s * sample_rate);
      const double f0_next =
          std::clamp(f0 * rng.uniform(0.85, 1.18), 0.6 * f0_base, 1.5 * f0_base);
      add_voiced(out, pos, std::min(len, n - pos), sample_rate, f0, f0_next,
                 rng.uniform(3.0, 6.0), formants, rng);
      f0 = f0_next;
      pos += len;
    } else if (u < 0.87) {  // unvoiced burst
      const size_t len = size_t(rng.uniform(0.05, 0.14) * sample_rate);
      add_fricative(out, pos, std::min(len, n - pos), rng);
      pos += len;
    } else {  // pause
      pos += size_t(rng.uniform(0.06, 0.22) * sample_rate);
    }
    pos += size_t(rng.uniform(0.01, 0.05) * sample_rate);
  }
  normalize_rms(out, 0.1);
  return out;
}

}  // namespace foamask::signal
