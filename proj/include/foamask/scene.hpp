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

#ifndef FOAMASK_SCENE_HPP_
#define FOAMASK_SCENE_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "foamask/common.hpp"
#include "foamask/foa.hpp"
#include "foamask/masks.hpp"
#include "foamask/stft.hpp"

namespace foamask::scene {

// Synthetic-room stand-in: direct path plus an exponentially decaying
// stochastic tail. rt60 drives the decay constant, direct_to_reverb_db the
// tail energy relative to the direct path.
struct ReverbParams {
  double rt60 = 0.5;                  // seconds, valid range [0.2, 0.8]
  double direct_to_reverb_db = 0.0;
};

struct SceneSource {
  std::string id;  // key into the mono source pool
  foa::Direction direction;
};

struct SceneSpec {
  SceneSource target;
  std::vector<SceneSource> interferers;  // up to two
  std::vector<double> sir_db;            // one entry per interferer
  double snr_db = 20.0;                  // +inf disables diffuse noise
  std::optional<ReverbParams> reverb;
  uint64_t seed = 0;
  double min_separation_deg = 25.0;
};

// Stems and ground truth for one mixture. mixture == target_image +
// noise_image bin-exact; the oracle mask is the energy-ratio mask of the
// (reverberant) stems' W channels.
struct SceneOutput {
  stft::Spectrogram mixture;
  stft::Spectrogram target_image;
  stft::Spectrogram noise_image;
  masks::Mask oracle_mask;
  SceneSpec spec;
};

using SourcePool = std::map<std::string, Channel>;

// Direct path encoded at dir, plus a decaying noise tail rendered on a
// quasi-uniform direction grid and scaled so the W-channel tail-to-direct
// energy ratio matches direct_to_reverb_db. Output trimmed to |dry| samples.
Waveform reverb_image(const Channel& dry, const ReverbParams& params,
                      const foa::Direction& dir, uint64_t seed,
                      int sample_rate);

stft::Spectrogram apply_reverb(const Channel& dry, double rt60,
                               double direct_to_reverb_db,
                               const foa::Direction& dir, uint64_t seed,
                               const stft::StftConfig& config);

// Renders target + interferers (+ diffuse noise) at calibrated W-channel
// SIR/SNR. Sources are trimmed to the shortest one; the target image is
// normalized to unit W power so outputs are invariant to input scaling.
SceneOutput synthesize_scene(const SceneSpec& spec, const SourcePool& sources,
                             const stft::StftConfig& config);

}  // namespace foamask::scene

#endif  // FOAMASK_SCENE_HPP_
