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

#include "foamask/foa.hpp"

#include <cmath>
#include <string>

#include "foamask/kernels.hpp"
#include "foamask/rng.hpp"

namespace foamask::foa {

Direction Direction::from_radians(double az, double el) {
  Direction d;
  // wrap azimuth into [-pi, pi)
  az = std::fmod(az + kPi, 2.0 * kPi);
  if (az < 0.0) az += 2.0 * kPi;
  d.azimuth = az - kPi;
  d.elevation = std::clamp(el, -kPi / 2.0, kPi / 2.0);
  return d;
}

Direction Direction::from_degrees(double az_deg, double el_deg) {
  return from_radians(deg_to_rad(az_deg), deg_to_rad(el_deg));
}

double angular_distance(const Direction& a, const Direction& b) {
  const double ca = std::cos(a.elevation), cb = std::cos(b.elevation);
  const double sa = std::sin(a.elevation), sb = std::sin(b.elevation);
  const double dot = sa * sb + ca * cb * std::cos(a.azimuth - b.azimuth);
  return std::acos(std::clamp(dot, -1.0, 1.0));
}

SteeringVector steering_vector(const Direction& dir) {
  const double s3 = std::sqrt(3.0);
  const double ce = std::cos(dir.elevation);
  return {1.0, s3 * std::cos(dir.azimuth) * ce,
          s3 * std::sin(dir.azimuth) * ce, s3 * std::sin(dir.elevation)};
}

std::vector<Direction> fibonacci_sphere(int count) {
  // golden-angle spiral; z strata avoid the poles
  std::vector<Direction> dirs;
  dirs.reserve(count);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int i = 0; i < count; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / count;
    const double el = std::asin(std::clamp(z, -1.0, 1.0));
    const double az = golden * i;
    dirs.push_back(Direction::from_radians(az, el));
  }
  return dirs;
}

stft::Spectrogram encode_plane_wave(const stft::Spectrogram& mono,
                                    const Direction& dir) {
  if (mono.channels != 1)
    throw DataError("encode_plane_wave: input must be 1-channel, got " +
                    std::to_string(mono.channels));
  const SteeringVector d = steering_vector(dir);
  stft::Spectrogram out(mono.config, 4, mono.frames);
  const std::size_t plane = static_cast<std::size_t>(mono.frames) * mono.bins;
  for (int c = 0; c < 4; ++c) {
    const float g = static_cast<float>(d[c]);
    const std::complex<float>* src = mono.data.data();
    std::complex<float>* dst = out.data.data() + c * plane;
    for (std::size_t i = 0; i < plane; ++i) dst[i] = g * src[i];
  }
  return out;
}

Waveform encode_plane_wave(const Channel& mono, const Direction& dir) {
  const SteeringVector d = steering_vector(dir);
  Waveform out(4);
  for (int c = 0; c < 4; ++c) {
    const float g = static_cast<float>(d[c]);
    out[c].resize(mono.size());
    for (std::size_t i = 0; i < mono.size(); ++i) out[c][i] = g * mono[i];
  }
  return out;
}

Waveform diffuse_noise_time(const Channel& tmpl, int num_directions,
                            uint64_t seed) {
  if (num_directions < 8)
    throw ConfigError("diffuse_noise: need at least 8 directions, got " +
                      std::to_string(num_directions));
  const std::size_t len = tmpl.size();
  if (len == 0) throw DataError("diffuse_noise: empty template");

  Rng rng(seed);
  const auto dirs = fibonacci_sphere(num_directions);
  Waveform out(4, Channel(len, 0.0f));
  // decorrelated copies: circular time shift + polarity flip per direction
  for (const auto& dir : dirs) {
    const std::size_t shift = rng.uniform_index(len);
    const float sign = rng.uniform() < 0.5 ? 1.0f : -1.0f;
    const SteeringVector d = steering_vector(dir);
    const std::size_t head = len - shift;
    for (int c = 0; c < 4; ++c) {
      const float g = sign * static_cast<float>(d[c]);
      float* dst = out[c].data();
      kernels::axpy_f32(g, tmpl.data(), dst + shift, head);
      kernels::axpy_f32(g, tmpl.data() + head, dst, len - head);
    }
  }

  const double tmpl_power =
      kernels::sumsq_f32(tmpl.data(), len) / static_cast<double>(len);
  const double w_power =
      kernels::sumsq_f32(out[0].data(), len) / static_cast<double>(len);
  const float gain =
      w_power > 0.0 ? static_cast<float>(std::sqrt(tmpl_power / w_power))
                    : 0.0f;
  for (auto& ch : out)
    for (auto& v : ch) v *= gain;
  return out;
}

stft::Spectrogram diffuse_noise(const Channel& tmpl, int num_directions,
                                uint64_t seed,
                                const stft::StftConfig& config) {
  if (tmpl.size() < static_cast<std::size_t>(config.frame_len))
    throw DataError("diffuse_noise: template shorter than one frame");
  return stft::analyze(diffuse_noise_time(tmpl, num_directions, seed),
                       config);
}

}  // namespace foamask::foa
