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

#include "pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <sstream>

namespace fs = std::filesystem;

namespace foamask::cli {
namespace {

std::string sibling(const std::string& manifest_path, const std::string& rel) {
  return (fs::path(manifest_path).parent_path() / rel).string();
}

std::string file_entry(const io::SceneManifest& m, const std::string& key,
                       const std::string& manifest_path) {
  const auto it = m.files.find(key);
  if (it == m.files.end())
    throw DataError(manifest_path + ": manifest lists no '" + key + "' file");
  return sibling(manifest_path, it->second);
}

}  // namespace

stft::Spectrogram load_foa_wav(const std::string& path,
                               const stft::StftConfig& config) {
  const io::WavData wav = io::read_wav(path);
  if (wav.channels.size() != 4)
    throw DataError(path + ": expected 4 FOA channels, found " +
                    std::to_string(wav.channels.size()));
  if (wav.sample_rate != config.sample_rate)
    throw DataError(path + ": sample rate " + std::to_string(wav.sample_rate) +
                    " != configured " + std::to_string(config.sample_rate));
  return stft::analyze(wav.channels, config);
}

scene::SceneOutput load_scene(const std::string& manifest_path) {
  const io::SceneManifest m = io::read_scene_manifest(manifest_path);
  scene::SceneOutput sc;
  sc.spec = m.spec;
  sc.mixture = load_foa_wav(file_entry(m, "mixture", manifest_path), m.stft);
  sc.target_image = load_foa_wav(file_entry(m, "target", manifest_path), m.stft);
  sc.noise_image = load_foa_wav(file_entry(m, "noise", manifest_path), m.stft);
  sc.oracle_mask = io::read_mask(file_entry(m, "mask", manifest_path));
  if (sc.oracle_mask.frames != sc.mixture.frames ||
      sc.oracle_mask.bins != sc.mixture.bins)
    throw DataError(manifest_path + ": oracle mask shape does not match mixture");
  if (!sc.mixture.same_shape(sc.target_image) ||
      !sc.mixture.same_shape(sc.noise_image))
    throw DataError(manifest_path + ": stem shapes do not match mixture");
  return sc;
}

std::vector<std::string> find_scene_manifests(const std::string& root) {
  if (!fs::is_directory(root))
    throw DataError(root + ": not a directory");
  std::vector<std::string> found;
  for (const auto& entry : fs::recursive_directory_iterator(root)) {
    if (entry.is_regular_file() && entry.path().filename() == "scene.ini")
      found.push_back(entry.path().string());
  }
  std::sort(found.begin(), found.end());
  return found;
}

void write_pgm(const std::string& path, const masks::Mask& mask) {
  std::ostringstream out;
  out << "P5\n" << mask.frames << " " << mask.bins << "\n255\n";
  for (int f = mask.bins - 1; f >= 0; --f) {
    for (int t = 0; t < mask.frames; ++t) {
      const float v = std::clamp(mask.at(t, f), 0.0f, 1.0f);
      out.put(char(int(std::lround(v * 255.0f))));
    }
  }
  io::atomic_write_bytes(path, out.str());
}

void write_matrix(const std::string& path, const masks::Mask& mask) {
  std::ostringstream out;
  out.precision(9);
  out << mask.frames << " " << mask.bins << "\n";
  for (int t = 0; t < mask.frames; ++t) {
    for (int f = 0; f < mask.bins; ++f) {
      if (f) out << " ";
      out << mask.at(t, f);
    }
    out << "\n";
  }
  io::atomic_write_bytes(path, out.str());
}

}  // namespace foamask::cli
