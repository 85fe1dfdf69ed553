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

#ifndef FOAMASK_IO_HPP_
#define FOAMASK_IO_HPP_

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "foamask/common.hpp"
#include "foamask/masks.hpp"
#include "foamask/scene.hpp"
#include "foamask/stft.hpp"
#include "foamask/unet.hpp"

namespace foamask::io {

// ---- files -----------------------------------------------------------

// Whole-file reads/writes; writes go to <path>.tmp then rename, so readers
// never observe a truncated artifact. Failures raise DataError.
std::string read_bytes(const std::string& path);
void atomic_write_bytes(const std::string& path, const std::string& bytes);

// ---- WAV -------------------------------------------------------------
// Interchange convention: RIFF WAV, IEEE float32, 16 kHz, channel order
// W,X,Y,Z for 4-channel FOA material. Readers also accept PCM16.

struct WavData {
  Waveform channels;
  int sample_rate = 0;
};

WavData read_wav(const std::string& path);
void write_wav(const std::string& path, const Waveform& channels,
               int sample_rate);

// ---- mask dump -------------------------------------------------------
// "FMSK" magic, u32 version, u32 frames, u32 bins (little-endian), then
// frames*bins row-major little-endian float32. Round trips are bit-exact.

masks::Mask read_mask(const std::string& path);
void write_mask(const std::string& path, const masks::Mask& mask);

// ---- manifest / config text -------------------------------------------
// Strict sectioned key-value text: `[section]` headers, `key = value`
// lines, `#` comments. Duplicate keys within a section are rejected.

struct Manifest {
  struct Section {
    std::string name;
    std::vector<std::pair<std::string, std::string>> entries;

    const std::string* find(const std::string& key) const;
  };
  std::vector<Section> sections;

  Section& add(const std::string& name);
  const Section* find(const std::string& name) const;
};

Manifest parse_manifest(const std::string& text);
std::string format_manifest(const Manifest& m);

// Typed, consumption-tracked view of one section: get() marks keys used,
// and close() rejects any the caller never asked about.
class SectionReader {
 public:
  explicit SectionReader(const Manifest::Section& sec) : sec_(sec) {}

  bool has(const std::string& key) const;
  std::string get(const std::string& key);
  std::string get_or(const std::string& key, const std::string& fallback);
  double get_double(const std::string& key);
  double get_double_or(const std::string& key, double fallback);
  int get_int(const std::string& key);
  int get_int_or(const std::string& key, int fallback);
  std::uint64_t get_u64(const std::string& key);
  void close() const;  // ConfigError naming the first unconsumed key

 private:
  const Manifest::Section& sec_;
  std::vector<std::string> used_;
};

// ---- scene manifest ----------------------------------------------------
// Text file written next to each simulated scene: resolved SceneSpec
// (DOAs in degrees, SIR/SNR, seeds), the STFT framing, and artifact
// file names relative to the manifest.

struct SceneManifest {
  scene::SceneSpec spec;
  stft::StftConfig stft;
  std::map<std::string, std::string> files;  // mixture, target, noise, mask
};

void write_scene_manifest(const std::string& path, const SceneManifest& m);
SceneManifest read_scene_manifest(const std::string& path);

// ---- checkpoint --------------------------------------------------------
// "FMCK" magic, version, network config, feature stats, named parameter
// tensors with explicit shapes (float32 LE), Nadam state, optional training
// state for resume, CRC-32 of everything before it.

void save_checkpoint(const std::string& path, const unet::UNetModel& model,
                     const unet::TrainState* state = nullptr);

struct LoadedCheckpoint {
  unet::UNetModel model;
  std::optional<unet::TrainState> state;
};
LoadedCheckpoint load_checkpoint(const std::string& path);

std::uint32_t crc32(const void* data, std::size_t len);

}  // namespace foamask::io

#endif  // FOAMASK_IO_HPP_
