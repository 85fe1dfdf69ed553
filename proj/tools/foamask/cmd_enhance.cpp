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

#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "commands.hpp"
#include "foamask/io.hpp"
#include "pipeline.hpp"

namespace fs = std::filesystem;

namespace foamask::cli {
namespace {

struct EnhanceOptions {
  std::string mix_path;
  std::string manifest_path;
  std::string mask_path;
  std::string checkpoint_path;
  std::string out_path;
  std::string dump_mask_path;
  std::vector<double> target_doa;      // az el, degrees
  std::vector<double> interferer_doa;  // az el pairs
  bool beamformer_only = false;
  bool mask_only = false;
  bool full_mwf = false;
  int frame_len = 1024;
  int sample_rate = 16000;
};

void run_enhance(const EnhanceOptions& opt) {
  const int sources = int(!opt.mask_path.empty()) +
                      int(!opt.checkpoint_path.empty()) +
                      int(opt.beamformer_only);
  if (sources != 1)
    throw ConfigError(
        "enhance: pick exactly one of --mask, --checkpoint, "
        "--beamformer-only");
  if (opt.beamformer_only && opt.mask_only)
    throw ConfigError("enhance: --beamformer-only excludes --mask-only");
  if (opt.beamformer_only && !opt.dump_mask_path.empty())
    throw ConfigError("enhance: --beamformer-only produces no mask to dump");

  // Scene geometry: manifest first, explicit DOA flags override.
  stft::StftConfig config;
  scene::SceneSpec spec;
  std::string mix_path = opt.mix_path;
  if (!opt.manifest_path.empty()) {
    const io::SceneManifest m = io::read_scene_manifest(opt.manifest_path);
    config = m.stft;
    spec = m.spec;
    if (mix_path.empty()) {
      const auto it = m.files.find("mixture");
      if (it != m.files.end())
        mix_path =
            (fs::path(opt.manifest_path).parent_path() / it->second).string();
    }
  } else {
    config.frame_len = opt.frame_len;
    config.hop = opt.frame_len / 2;
    config.sample_rate = opt.sample_rate;
    config.validate();
  }
  if (!opt.target_doa.empty()) {
    if (opt.target_doa.size() != 2)
      throw ConfigError("enhance: --target-doa needs 'azimuth elevation'");
    spec.target = {"target", foa::Direction::from_degrees(opt.target_doa[0],
                                                          opt.target_doa[1])};
  }
  if (!opt.interferer_doa.empty()) {
    if (opt.interferer_doa.size() % 2 != 0)
      throw ConfigError("enhance: --interferer-doa needs az/el pairs");
    spec.interferers.clear();
    for (std::size_t i = 0; i + 1 < opt.interferer_doa.size(); i += 2)
      spec.interferers.push_back(
          {"interferer" + std::to_string(i / 2 + 1),
           foa::Direction::from_degrees(opt.interferer_doa[i],
                                        opt.interferer_doa[i + 1])});
  }
  if (opt.manifest_path.empty() && opt.target_doa.empty())
    throw ConfigError("enhance: target DOA needed (--manifest or --target-doa)");
  if (mix_path.empty())
    throw ConfigError("enhance: no mixture (--mix or manifest files entry)");

  const stft::Spectrogram mix = load_foa_wav(mix_path, config);

  std::optional<masks::Mask> mask;
  if (!opt.mask_path.empty()) {
    mask = io::read_mask(opt.mask_path);
    if (mask->frames != mix.frames || mask->bins != mix.bins)
      throw DataError(opt.mask_path + ": mask shape does not match mixture");
  } else if (!opt.checkpoint_path.empty()) {
    io::LoadedCheckpoint ckpt = io::load_checkpoint(opt.checkpoint_path);
    mask = net_mask(ckpt.model, mix, spec);
  }

  stft::Spectrogram enhanced;
  if (opt.beamformer_only) {
    enhanced = beamformer_output(mix, spec);
  } else if (opt.mask_only) {
    enhanced = mask_w_channel(mix, *mask);
  } else {
    enhanced = filter_with_mask(mix, *mask, !opt.full_mwf);
  }

  const Channel out = stft::synthesize_mono(enhanced);
  io::write_wav(opt.out_path, {out}, config.sample_rate);
  if (!opt.dump_mask_path.empty()) io::write_mask(opt.dump_mask_path, *mask);
  std::cout << opt.out_path << "\n";
}

}  // namespace

void register_cmd_enhance(CLI::App& app) {
  auto opt = std::make_shared<EnhanceOptions>();
  CLI::App* cmd = app.add_subcommand(
      "enhance", "Enhance a 4-channel FOA mixture with a mask source");
  cmd->add_option("--mix", opt->mix_path, "4-channel FOA mixture WAV");
  cmd->add_option("--manifest", opt->manifest_path,
                  "Scene manifest supplying DOAs (and the mixture path)");
  cmd->add_option("--mask", opt->mask_path, "Oracle/precomputed mask dump");
  cmd->add_option("--checkpoint", opt->checkpoint_path, "Trained model");
  cmd->add_option("--out", opt->out_path, "Enhanced mono WAV")->required();
  cmd->add_option("--dump-mask", opt->dump_mask_path,
                  "Also write the mask used");
  cmd->add_option("--target-doa", opt->target_doa,
                  "Target azimuth elevation (degrees), overrides manifest")
      ->expected(2);
  cmd->add_option("--interferer-doa", opt->interferer_doa,
                  "Interferer az/el pairs (degrees), overrides manifest");
  cmd->add_flag("--beamformer-only", opt->beamformer_only,
                "Apply the target beamformer only (no mask, no MWF)");
  cmd->add_flag("--mask-only", opt->mask_only,
                "Apply the mask to the W channel (no spatial filter)");
  cmd->add_flag("--full-mwf", opt->full_mwf,
                "Use the full MWF instead of the rank-1 GEVD variant");
  cmd->add_option("--frame-len", opt->frame_len,
                  "STFT frame length (without --manifest)");
  cmd->add_option("--sample-rate", opt->sample_rate,
                  "Sample rate, Hz (without --manifest)");
  cmd->callback([opt] { run_enhance(*opt); });
}

}  // namespace foamask::cli
