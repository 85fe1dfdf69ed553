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
#include <string>

#include "commands.hpp"
#include "foamask/io.hpp"
#include "pipeline.hpp"

namespace fs = std::filesystem;

namespace foamask::cli {
namespace {

struct DumpMaskOptions {
  std::string mask_path;
  std::string checkpoint_path;
  std::string manifest_path;
  std::string mix_path;
  std::string image_path;
  std::string matrix_path;
  std::string mask_out_path;
  bool oracle = false;
};

void run_dump_mask(const DumpMaskOptions& opt) {
  const int sources = int(!opt.mask_path.empty()) +
                      int(!opt.checkpoint_path.empty()) + int(opt.oracle);
  if (sources != 1)
    throw ConfigError(
        "dump-mask: pick exactly one of --mask, --checkpoint, --oracle");
  if (opt.image_path.empty() && opt.matrix_path.empty() &&
      opt.mask_out_path.empty())
    throw ConfigError(
        "dump-mask: nothing to write (--image, --matrix, or --out-mask)");

  masks::Mask mask;
  if (!opt.mask_path.empty()) {
    mask = io::read_mask(opt.mask_path);
  } else if (opt.oracle) {
    if (opt.manifest_path.empty())
      throw ConfigError("dump-mask: --oracle needs --manifest");
    mask = load_scene(opt.manifest_path).oracle_mask;
  } else {
    if (opt.manifest_path.empty())
      throw ConfigError("dump-mask: --checkpoint needs --manifest for DOAs");
    const io::SceneManifest m = io::read_scene_manifest(opt.manifest_path);
    std::string mix_path = opt.mix_path;
    if (mix_path.empty()) {
      const auto it = m.files.find("mixture");
      if (it == m.files.end())
        throw ConfigError("dump-mask: no mixture (--mix or manifest entry)");
      mix_path =
          (fs::path(opt.manifest_path).parent_path() / it->second).string();
    }
    const stft::Spectrogram mix = load_foa_wav(mix_path, m.stft);
    io::LoadedCheckpoint ckpt = io::load_checkpoint(opt.checkpoint_path);
    mask = net_mask(ckpt.model, mix, m.spec);
  }

  if (!opt.image_path.empty()) write_pgm(opt.image_path, mask);
  if (!opt.matrix_path.empty()) write_matrix(opt.matrix_path, mask);
  if (!opt.mask_out_path.empty()) io::write_mask(opt.mask_out_path, mask);
  std::cout << mask.frames << " frames x " << mask.bins << " bins\n";
}

}  // namespace

void register_cmd_dump_mask(CLI::App& app) {
  auto opt = std::make_shared<DumpMaskOptions>();
  CLI::App* cmd = app.add_subcommand(
      "dump-mask", "Render a mask as an image, text matrix, or mask dump");
  cmd->add_option("--mask", opt->mask_path, "Mask dump to render");
  cmd->add_option("--checkpoint", opt->checkpoint_path,
                  "Predict the mask with a trained model");
  cmd->add_flag("--oracle", opt->oracle, "Use the scene's oracle mask");
  cmd->add_option("--manifest", opt->manifest_path,
                  "Scene manifest (for --oracle / --checkpoint)");
  cmd->add_option("--mix", opt->mix_path,
                  "Mixture WAV (default: manifest entry)");
  cmd->add_option("--image", opt->image_path, "PGM image output");
  cmd->add_option("--matrix", opt->matrix_path, "Text matrix output");
  cmd->add_option("--out-mask", opt->mask_out_path, "Mask dump output");
  cmd->callback([opt] { run_dump_mask(*opt); });
}

}  // namespace foamask::cli
