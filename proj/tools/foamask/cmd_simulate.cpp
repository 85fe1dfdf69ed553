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

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <memory>
#include <string>
#include <vector>

#include "commands.hpp"
#include "foamask/io.hpp"
#include "foamask/rng.hpp"
#include "foamask/scene.hpp"
#include "pipeline.hpp"

namespace fs = std::filesystem;

namespace foamask::cli {
namespace {

struct SimulateOptions {
  std::string sources_dir;
  std::string out_dir;
  std::string target_id;
  std::vector<double> target_doa;  // az el, degrees
  std::vector<std::string> interferer_ids;
  std::vector<double> interferer_doa;  // az el per interferer, flattened
  std::vector<double> sir_db;
  double snr_db = 20.0;
  double rt60 = 0.0;  // 0 disables reverb
  double drr_db = 0.0;
  double min_separation_deg = 25.0;
  std::uint64_t seed = 0;
  int frame_len = 1024;
  int sample_rate = 16000;
  int count = 0;  // 0: single scene into out_dir
  bool random_doa = false;
  bool random_source = false;
  int interferers = -1;  // only with --random-source
};

scene::SourcePool load_pool(const std::string& dir, int sample_rate) {
  if (!fs::is_directory(dir)) throw DataError(dir + ": not a directory");
  scene::SourcePool pool;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".wav")
      continue;
    const io::WavData wav = io::read_wav(entry.path().string());
    if (wav.channels.size() != 1)
      throw DataError(entry.path().string() + ": sources must be mono");
    if (wav.sample_rate != sample_rate)
      throw DataError(entry.path().string() + ": sample rate " +
                      std::to_string(wav.sample_rate) + " != " +
                      std::to_string(sample_rate));
    pool[entry.path().stem().string()] = wav.channels[0];
  }
  if (pool.empty()) throw DataError(dir + ": no .wav sources found");
  return pool;
}

foa::Direction doa_from_pair(const std::vector<double>& v, std::size_t i) {
  return foa::Direction::from_degrees(v[2 * i], v[2 * i + 1]);
}

// Draws num directions with pairwise separation >= floor (rejection).
std::vector<foa::Direction> draw_doas(Rng& rng, std::size_t num,
                                      double floor_deg) {
  for (int attempt = 0; attempt < 1000; ++attempt) {
    std::vector<foa::Direction> dirs;
    for (std::size_t i = 0; i < num; ++i) {
      dirs.push_back(foa::Direction::from_degrees(rng.uniform(-180.0, 180.0),
                                                  rng.uniform(-30.0, 30.0)));
    }
    bool ok = true;
    for (std::size_t i = 0; i < num && ok; ++i)
      for (std::size_t j = i + 1; j < num && ok; ++j)
        if (rad_to_deg(foa::angular_distance(dirs[i], dirs[j])) < floor_deg)
          ok = false;
    if (ok) return dirs;
  }
  throw ConfigError("simulate: cannot place " + std::to_string(num) +
                    " sources " + std::to_string(floor_deg) + " deg apart");
}

void write_scene(const scene::SceneOutput& sc, const stft::StftConfig& config,
                 const std::string& dir) {
  fs::create_directories(dir);
  const Waveform mix = stft::synthesize(sc.mixture);
  const Waveform target = stft::synthesize(sc.target_image);
  const Waveform noise = stft::synthesize(sc.noise_image);
  io::write_wav((fs::path(dir) / "mixture.wav").string(), mix,
                config.sample_rate);
  io::write_wav((fs::path(dir) / "target.wav").string(), target,
                config.sample_rate);
  io::write_wav((fs::path(dir) / "noise.wav").string(), noise,
                config.sample_rate);
  io::write_mask((fs::path(dir) / "oracle.fmsk").string(), sc.oracle_mask);

  io::SceneManifest manifest;
  manifest.spec = sc.spec;
  manifest.stft = config;
  manifest.files = {{"mixture", "mixture.wav"},
                    {"target", "target.wav"},
                    {"noise", "noise.wav"},
                    {"mask", "oracle.fmsk"}};
  io::write_scene_manifest((fs::path(dir) / "scene.ini").string(), manifest);
}

void run_simulate(const SimulateOptions& opt) {
  stft::StftConfig config;
  config.frame_len = opt.frame_len;
  config.hop = opt.frame_len / 2;
  config.sample_rate = opt.sample_rate;
  config.validate();

  const scene::SourcePool pool = load_pool(opt.sources_dir, opt.sample_rate);

  scene::SceneSpec base;
  base.snr_db = opt.snr_db;
  base.min_separation_deg = opt.min_separation_deg;
  base.sir_db = opt.sir_db;
  if (opt.rt60 > 0.0) base.reverb = scene::ReverbParams{opt.rt60, opt.drr_db};

  const bool multi = opt.count > 0;
  if (!multi) {
    if (opt.random_doa || opt.random_source)
      throw ConfigError("simulate: --random-doa/--random-source need --count");
    if (opt.target_id.empty())
      throw ConfigError("simulate: --target-id is required");
    if (opt.target_doa.size() != 2)
      throw ConfigError("simulate: --target-doa needs 'azimuth elevation'");
    if (opt.interferer_doa.size() != 2 * opt.interferer_ids.size())
      throw ConfigError(
          "simulate: --interferer-doa needs one az/el pair per interferer");
    base.seed = opt.seed;
    base.target = {opt.target_id, doa_from_pair(opt.target_doa, 0)};
    for (std::size_t i = 0; i < opt.interferer_ids.size(); ++i)
      base.interferers.push_back(
          {opt.interferer_ids[i], doa_from_pair(opt.interferer_doa, i)});
    const scene::SceneOutput sc = scene::synthesize_scene(base, pool, config);
    write_scene(sc, config, opt.out_dir);
    std::cout << opt.out_dir << "\n";
    return;
  }

  if (!opt.random_doa)
    throw ConfigError("simulate: --count needs --random-doa");
  std::size_t num_sources;
  std::vector<std::string> fixed_ids;
  if (opt.random_source) {
    if (opt.interferers < 0 || opt.interferers > 2)
      throw ConfigError("simulate: --random-source needs --interferers 0..2");
    if (!opt.target_id.empty() || !opt.interferer_ids.empty())
      throw ConfigError("simulate: --random-source excludes explicit ids");
    num_sources = std::size_t(opt.interferers) + 1;
    for (const auto& [id, ch] : pool) fixed_ids.push_back(id);
    if (fixed_ids.size() < num_sources)
      throw DataError("simulate: source pool smaller than scene cast");
  } else {
    if (opt.target_id.empty())
      throw ConfigError("simulate: --target-id is required");
    num_sources = opt.interferer_ids.size() + 1;
  }
  if (base.sir_db.size() != num_sources - 1)
    throw ConfigError("simulate: need one --sir per interferer");

  for (int i = 0; i < opt.count; ++i) {
    Rng draw(opt.seed ^ (0xD0A0D0A0D0A0D0A0ull + std::uint64_t(i)));
    scene::SceneSpec spec = base;
    spec.seed = opt.seed + std::uint64_t(i);
    const auto dirs = draw_doas(draw, num_sources, opt.min_separation_deg);
    std::vector<std::string> ids;
    if (opt.random_source) {
      std::vector<std::string> shuffled = fixed_ids;
      for (std::size_t k = shuffled.size(); k > 1; --k)
        std::swap(shuffled[k - 1], shuffled[draw.uniform_index(k)]);
      ids.assign(shuffled.begin(), shuffled.begin() + long(num_sources));
    } else {
      ids.push_back(opt.target_id);
      for (const auto& id : opt.interferer_ids) ids.push_back(id);
    }
    spec.target = {ids[0], dirs[0]};
    for (std::size_t k = 1; k < num_sources; ++k)
      spec.interferers.push_back({ids[k], dirs[k]});

    char name[32];
    std::snprintf(name, sizeof(name), "scene_%04d", i);
    const std::string dir = (fs::path(opt.out_dir) / name).string();
    const scene::SceneOutput sc = scene::synthesize_scene(spec, pool, config);
    write_scene(sc, config, dir);
    std::cout << dir << "\n";
  }
}

}  // namespace

void register_cmd_simulate(CLI::App& app) {
  auto opt = std::make_shared<SimulateOptions>();
  CLI::App* cmd = app.add_subcommand(
      "simulate", "Render FOA scenes with stems, oracle masks, manifests");
  cmd->add_option("--sources", opt->sources_dir,
                  "Directory of mono source WAVs (id = file stem)")
      ->required();
  cmd->add_option("--out", opt->out_dir, "Output scene directory")->required();
  cmd->add_option("--target-id", opt->target_id, "Target source id");
  cmd->add_option("--target-doa", opt->target_doa,
                  "Target azimuth elevation (degrees)")
      ->expected(2);
  cmd->add_option("--interferer-id", opt->interferer_ids,
                  "Interferer source id (repeatable, up to 2)");
  cmd->add_option("--interferer-doa", opt->interferer_doa,
                  "Interferer azimuth elevation (degrees, repeatable)");
  cmd->add_option("--sir", opt->sir_db, "SIR in dB, one per interferer");
  cmd->add_option("--snr", opt->snr_db,
                  "Diffuse-noise SNR in dB (inf disables)");
  cmd->add_option("--rt60", opt->rt60, "Reverb RT60 seconds (0 = anechoic)");
  cmd->add_option("--drr", opt->drr_db, "Direct-to-reverb ratio in dB");
  cmd->add_option("--min-separation", opt->min_separation_deg,
                  "Angular floor between sources, degrees");
  cmd->add_option("--seed", opt->seed, "Scene seed");
  cmd->add_option("--frame-len", opt->frame_len, "STFT frame length");
  cmd->add_option("--sample-rate", opt->sample_rate, "Sample rate, Hz");
  cmd->add_option("--count", opt->count,
                  "Generate this many scenes into out/scene_NNNN");
  cmd->add_flag("--random-doa", opt->random_doa,
                "Draw DOAs per scene (with --count)");
  cmd->add_flag("--random-source", opt->random_source,
                "Draw source ids per scene (with --count)");
  cmd->add_option("--interferers", opt->interferers,
                  "Interferer count (with --random-source)");
  cmd->callback([opt] { run_simulate(*opt); });
}

}  // namespace foamask::cli
