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

#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "foamask/common.hpp"
#include "foamask/stft.hpp"
#include "helpers.hpp"

using namespace foamask;
using test::rand_channel;

namespace {

stft::StftConfig small_cfg(int frame_len = 64) {
  stft::StftConfig cfg;
  cfg.frame_len = frame_len;
  cfg.hop = frame_len / 2;
  return cfg;
}

double interior_rel_l2(const Channel& got, const Channel& want, int margin) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = margin; i + margin < want.size() && i < got.size(); ++i) {
    const double d = static_cast<double>(got[i]) - want[i];
    num += d * d;
    den += static_cast<double>(want[i]) * want[i];
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST_SUITE("stft") {

TEST_CASE("config validation") {
  CHECK_NOTHROW(small_cfg(16).validate());
  CHECK_NOTHROW(small_cfg(1024).validate());
  CHECK_THROWS_AS(small_cfg(8).validate(), ConfigError);     // too short
  CHECK_THROWS_AS(small_cfg(100).validate(), ConfigError);   // not a power of 2
  stft::StftConfig bad_hop = small_cfg(64);
  bad_hop.hop = 16;
  CHECK_THROWS_AS(bad_hop.validate(), ConfigError);
  CHECK(small_cfg(64).bins() == 33);
}

TEST_CASE("frame_count counts fully interior frames") {
  const auto cfg = small_cfg(64);
  CHECK(stft::frame_count(63, cfg) == 0);
  CHECK(stft::frame_count(64, cfg) == 1);
  CHECK(stft::frame_count(95, cfg) == 1);
  CHECK(stft::frame_count(96, cfg) == 2);
  CHECK(stft::frame_count(64 + 5 * 32, cfg) == 6);
}

TEST_CASE("analyze matches a naive windowed DFT") {
  const auto cfg = small_cfg(64);
  Rng rng(3);
  const Channel x = rand_channel(rng, 64);
  const stft::Spectrogram spec = stft::analyze(x, cfg);
  REQUIRE(spec.frames == 1);
  REQUIRE(spec.bins == 33);

  const int n = cfg.frame_len;
  for (int k = 0; k < spec.bins; ++k) {
    std::complex<double> acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = std::sin(kPi * (i + 0.5) / n);
      const double a = -2.0 * kPi * k * i / n;
      acc += w * static_cast<double>(x[i]) *
             std::complex<double>(std::cos(a), std::sin(a));
    }
    CHECK(std::abs(std::complex<double>(spec.at(0, 0, k)) - acc) <=
          1e-4 * (1.0 + std::abs(acc)));
  }
}

TEST_CASE("analyze is linear") {
  const auto cfg = small_cfg(64);
  Rng rng(5);
  const Channel a = rand_channel(rng, 200);
  const Channel b = rand_channel(rng, 200);
  Channel sum(200);
  for (int i = 0; i < 200; ++i) sum[i] = a[i] + b[i];
  const auto sa = stft::analyze(a, cfg);
  const auto sb = stft::analyze(b, cfg);
  const auto ss = stft::analyze(sum, cfg);
  for (std::size_t i = 0; i < ss.data.size(); ++i)
    CHECK(std::abs(ss.data[i] - (sa.data[i] + sb.data[i])) <= 1e-5f);
}

TEST_CASE("round trip reconstructs the interior") {
  const auto cfg = small_cfg(256);
  Rng rng(17);
  const Channel x = rand_channel(rng, 4000);
  const auto spec = stft::analyze(x, cfg);
  const Channel y = stft::synthesize_mono(spec);
  CHECK(interior_rel_l2(y, x, cfg.frame_len) < 1e-6);
}

TEST_CASE("round trip of a 440 Hz sine") {
  stft::StftConfig cfg;  // 1024/512 @ 16 kHz
  Channel x(16000);
  for (std::size_t i = 0; i < x.size(); ++i)
    x[i] = 0.7f * static_cast<float>(std::sin(2.0 * kPi * 440.0 * i / 16000.0));
  const Channel y = stft::synthesize_mono(stft::analyze(x, cfg));
  CHECK(interior_rel_l2(y, x, cfg.frame_len) < 1e-6);
}

TEST_CASE("per-frame Parseval consistency") {
  const auto cfg = small_cfg(64);
  Rng rng(23);
  const Channel x = rand_channel(rng, 64 * 3);
  const auto spec = stft::analyze(x, cfg);
  const int n = cfg.frame_len;
  for (int t = 0; t < spec.frames; ++t) {
    double time_e = 0.0;
    for (int i = 0; i < n; ++i) {
      const double w = std::sin(kPi * (i + 0.5) / n);
      const double v = w * x[static_cast<std::size_t>(t) * cfg.hop + i];
      time_e += v * v;
    }
    // one-sided spectrum: interior bins count twice
    double freq_e = 0.0;
    for (int k = 0; k < spec.bins; ++k) {
      const double m = std::abs(std::complex<double>(spec.at(0, t, k)));
      const double mult = (k == 0 || k == n / 2) ? 1.0 : 2.0;
      freq_e += mult * m * m;
    }
    freq_e /= n;
    CHECK(test::rel_err(freq_e, time_e) < 1e-6);
  }
}

TEST_CASE("multichannel analyze keeps channels independent") {
  const auto cfg = small_cfg(64);
  Rng rng(29);
  Waveform wf;
  wf.push_back(rand_channel(rng, 300));
  wf.push_back(rand_channel(rng, 300));
  const auto both = stft::analyze(wf, cfg);
  REQUIRE(both.channels == 2);
  const auto c0 = stft::analyze(wf[0], cfg);
  const auto c1 = stft::analyze(wf[1], cfg);
  for (int t = 0; t < both.frames; ++t)
    for (int k = 0; k < both.bins; ++k) {
      CHECK(both.at(0, t, k) == c0.at(0, t, k));
      CHECK(both.at(1, t, k) == c1.at(0, t, k));
    }

  const auto one = both.channel(1);
  CHECK(one.channels == 1);
  CHECK(one.frames == both.frames);
  for (std::size_t i = 0; i < one.data.size(); ++i)
    CHECK(one.data[i] == c1.data[i]);
}

TEST_CASE("analyze rejects bad input") {
  const auto cfg = small_cfg(64);
  CHECK_THROWS_AS(stft::analyze(Channel(10, 0.0f), cfg), DataError);
  Waveform ragged;
  ragged.push_back(Channel(100, 0.0f));
  ragged.push_back(Channel(99, 0.0f));
  CHECK_THROWS_AS(stft::analyze(ragged, cfg), DataError);
  Channel nan(100, 0.0f);
  nan[50] = std::nanf("");
  CHECK_THROWS_AS(stft::analyze(nan, cfg), DataError);
  CHECK_THROWS_AS(stft::analyze(Waveform{}, cfg), DataError);
}

TEST_CASE("synthesize_mono requires one channel") {
  const auto cfg = small_cfg(64);
  Rng rng(1);
  const auto spec = test::rand_spec(rng, 2, 3, cfg);
  CHECK_THROWS_AS(stft::synthesize_mono(spec), DataError);
}

TEST_CASE("convolve matches the quadratic oracle") {
  Rng rng(37);
  const Channel x = rand_channel(rng, 200);
  const Channel h = rand_channel(rng, 37);
  const Channel y = stft::convolve(x, h);
  REQUIRE(y.size() == x.size() + h.size() - 1);
  double peak = 0.0;
  for (float v : y) peak = std::max(peak, std::abs(static_cast<double>(v)));
  for (std::size_t i = 0; i < y.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j < h.size(); ++j)
      if (i >= j && i - j < x.size())
        acc += static_cast<double>(h[j]) * x[i - j];
    CHECK(std::abs(y[i] - acc) <= 1e-5 * (peak + 1.0));
  }
  CHECK(stft::convolve(Channel{}, h).empty());
  CHECK(stft::convolve(x, Channel{}).empty());
}

TEST_CASE("convolve identity impulse") {
  Rng rng(41);
  const Channel x = rand_channel(rng, 100);
  const Channel y = stft::convolve(x, Channel{1.0f});
  REQUIRE(y.size() == x.size());
  for (std::size_t i = 0; i < x.size(); ++i)
    CHECK(std::abs(y[i] - x[i]) <= 1e-6f);
}

}  // TEST_SUITE
