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

#ifndef FOAMASK_TOOLS_PIPELINE_HPP_
#define FOAMASK_TOOLS_PIPELINE_HPP_

#include <string>
#include <vector>

#include "foamask/io.hpp"
#include "foamask/masks.hpp"
#include "foamask/scene.hpp"
#include "foamask/stft.hpp"
#include "foamask/systems.hpp"

namespace foamask::cli {

using systems::beamformer_output;
using systems::filter_with_mask;
using systems::mask_w_channel;
using systems::net_mask;

// Rebuilds a SceneOutput from a scene manifest and the stem files next to it.
scene::SceneOutput load_scene(const std::string& manifest_path);

// Recursively collects scene.ini manifests under root, sorted by path.
std::vector<std::string> find_scene_manifests(const std::string& root);

// Reads a 4-channel FOA WAV and checks the rate against the config.
stft::Spectrogram load_foa_wav(const std::string& path,
                               const stft::StftConfig& config);

// 8-bit PGM, frequency ascending upward, one pixel per (t, f).
void write_pgm(const std::string& path, const masks::Mask& mask);

// Plain text: "frames bins" header line, then one frame per line.
void write_matrix(const std::string& path, const masks::Mask& mask);

}  // namespace foamask::cli

#endif  // FOAMASK_TOOLS_PIPELINE_HPP_
