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

#include "foamask/scene.hpp"

#include <cmath>
#include <string>

#include "foamask/kernels.hpp"
#include "foamask/rng.hpp"

namespace foamask::scene {
namespace {

constexpr int kTailDirections = 16;
constexpr double kPreDelaySeconds = 0.005;

double spec_w_energy(const stft::Spectrogram& s) {
  // |re|^2 + |im|^2 over the channel-0 plane
  const std::size_t n = static_cast<std::size_t>(s.frames) * s.bins * 2;
  return kernels::sumsq_f32(reinterpret_cast<const float*>(s.data.data()), n);
}

void scale_spec(stft::Spectrogram& s, float g) {
  for (auto& v : s.data) v *= g;
}

void add_spec(stft::Spectrogram& acc, const stft::Spectrogram& s) {
  for (std::size_t i = 0; i < acc.data.size(); ++i) acc.data[i] += s.data[i];
}

Channel trimmed(const Channel& src, std::size_t len) {
  return Channel(src.begin(), src.begin() + len);
}

}  // namespace

Waveform reverb_image(const Channel& dry, const ReverbParams& params,
                      const foa::Direction& dir, uint64_t seed,
                      int sample_rate) {
  if (params.rt60 < 0.2 || params.rt60 > 0.8)
    throw ConfigError("reverb: rt60 must be in [0.2, 0.8] s, got " +
                      std::to_string(params.rt60));
  Waveform out = foa::encode_plane_wave(dry, dir);
  if (std::isinf(params.direct_to_reverb_db) &&
      params.direct_to_reverb_db > 0)
    return out;

  const std::size_t len = dry.size();
  const int pre_delay = static_cast<int>(std::lround(kPreDelaySeconds * sample_rate));
  // -60 dB of the squared envelope exp(-2n/tau) at n = rt60*fs
  const double tau = params.rt60 * sample_rate / (3.0 * std::log(10.0));
  const int rir_len =
      pre_delay + static_cast<int>(std::ceil(1.3 * params.rt60 * sample_rate));

  // One decaying-noise RIR per grid direction, encoded and summed into a
  // 4-channel RIR; directions share the envelope but draw independent noise.
  Rng rng(seed);
  const auto dirs = foa::fibonacci_sphere(kTailDirections);
  std::vector<float> env(rir_len, 0.0f);
  for (int n = pre_delay; n < rir_len; ++n)
    env[n] = static_cast<float>(std::exp(-(n - pre_delay) / tau));
  Waveform rir(4, Channel(rir_len, 0.0f));
  std::vector<float> h(rir_len, 0.0f);
  for (const auto& d : dirs) {
    Rng stream = rng.fork(0);
    for (int n = pre_delay; n < rir_len; ++n)
      h[n] = env[n] * static_cast<float>(stream.gaussian());
    const foa::SteeringVector g = foa::steering_vector(d);
    for (int c = 0; c < 4; ++c)
      kernels::axpy_f32(static_cast<float>(g[c]), h.data(), rir[c].data(),
                        rir_len);
  }

  Waveform tail(4);
  for (int c = 0; c < 4; ++c) {
    tail[c] = stft::convolve(dry, rir[c]);
    tail[c].resize(len);
  }
  const double e_direct = kernels::sumsq_f32(out[0].data(), len);
  const double e_tail = kernels::sumsq_f32(tail[0].data(), len);
  if (e_tail > 0.0) {
    const float g = static_cast<float>(std::sqrt(
        e_direct * std::pow(10.0, -params.direct_to_reverb_db / 10.0) /
        e_tail));
    for (int c = 0; c < 4; ++c)
      kernels::axpy_f32(g, tail[c].data(), out[c].data(), len);
  }
  return out;
}

stft::Spectrogram apply_reverb(const Channel& dry, double rt60,
                               double direct_to_reverb_db,
                               const foa::Direction& dir, uint64_t seed,
                               const stft::StftConfig& config) {
  return stft::analyze(
      reverb_image(dry, {rt60, direct_to_reverb_db}, dir, seed,
                   config.sample_rate),
      config);
}

SceneOutput synthesize_scene(const SceneSpec& spec, const SourcePool& sources,
                             const stft::StftConfig& config) {
  config.validate();
  if (spec.interferers.size() > 2)
    throw ConfigError("scene: at most 2 interferers, got " +
                      std::to_string(spec.interferers.size()));
  if (spec.sir_db.size() != spec.interferers.size())
    throw ConfigError("scene: need one sir_db per interferer");

  std::vector<SceneSource> all;
  all.push_back(spec.target);
  for (const auto& s : spec.interferers) all.push_back(s);
  const double floor_rad = deg_to_rad(spec.min_separation_deg);
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = i + 1; j < all.size(); ++j) {
      const double sep = foa::angular_distance(all[i].direction, all[j].direction);
      if (sep < floor_rad - 1e-12)
        throw ConfigError("scene: sources '" + all[i].id + "' and '" +
                          all[j].id + "' are " +
                          std::to_string(rad_to_deg(sep)) +
                          " deg apart; floor is " +
                          std::to_string(spec.min_separation_deg));
    }
  }

  std::size_t len = SIZE_MAX;
  for (const auto& s : all) {
    auto it = sources.find(s.id);
    if (it == sources.end())
      throw DataError("scene: missing source '" + s.id + "'");
    if (it->second.size() < static_cast<std::size_t>(config.sample_rate))
      throw DataError("scene: source '" + s.id + "' shorter than 1 s");
    if (kernels::sumsq_f32(it->second.data(), it->second.size()) <= 0.0)
      throw DataError("scene: source '" + s.id + "' has zero energy");
    len = std::min(len, it->second.size());
  }

  Rng root(spec.seed);
  std::vector<uint64_t> stem_seeds;
  for (std::size_t k = 0; k < all.size(); ++k) stem_seeds.push_back(root.next());
  const uint64_t tmpl_seed = root.next();
  const uint64_t field_seed = root.next();

  auto render = [&](const SceneSource& src, uint64_t sd) {
    const Channel dry = trimmed(sources.at(src.id), len);
    if (spec.reverb)
      return stft::analyze(
          reverb_image(dry, *spec.reverb, src.direction, sd,
                       config.sample_rate),
          config);
    return stft::analyze(foa::encode_plane_wave(dry, src.direction), config);
  };

  stft::Spectrogram target_image = render(spec.target, stem_seeds[0]);
  const double e_raw = spec_w_energy(target_image);
  if (e_raw <= 0.0) throw DataError("scene: target image has zero W energy");
  scale_spec(target_image, static_cast<float>(1.0 / std::sqrt(e_raw)));
  const double e_target = spec_w_energy(target_image);

  stft::Spectrogram noise_image(config, 4, target_image.frames);
  for (std::size_t k = 0; k < spec.interferers.size(); ++k) {
    stft::Spectrogram stem = render(spec.interferers[k], stem_seeds[k + 1]);
    const double e = spec_w_energy(stem);
    if (e <= 0.0)
      throw DataError("scene: interferer image has zero W energy");
    const double want = e_target * std::pow(10.0, -spec.sir_db[k] / 10.0);
    scale_spec(stem, static_cast<float>(std::sqrt(want / e)));
    add_spec(noise_image, stem);
  }

  if (std::isfinite(spec.snr_db)) {
    Rng tr(tmpl_seed);
    Channel tmpl(len);
    for (auto& v : tmpl) v = static_cast<float>(tr.gaussian());
    stft::Spectrogram diff = stft::analyze(
        foa::diffuse_noise_time(tmpl, kTailDirections, field_seed), config);
    const double e = spec_w_energy(diff);
    if (e > 0.0) {
      const double want = e_target * std::pow(10.0, -spec.snr_db / 10.0);
      scale_spec(diff, static_cast<float>(std::sqrt(want / e)));
      add_spec(noise_image, diff);
    }
  }

  SceneOutput out;
  out.mixture = target_image;
  add_spec(out.mixture, noise_image);
  out.oracle_mask = masks::ideal_mask(target_image, noise_image);
  out.target_image = std::move(target_image);
  out.noise_image = std::move(noise_image);
  out.spec = spec;
  return out;
}

}  // namespace foamask::scene
