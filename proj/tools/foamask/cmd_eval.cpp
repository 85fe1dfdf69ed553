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

#include <cstdio>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "commands.hpp"
#include "foamask/io.hpp"
#include "foamask/metrics.hpp"
#include "pipeline.hpp"

namespace foamask::cli {
namespace {

struct EvalOptions {
  std::string data_dir;
  std::string checkpoint_path;
  std::string table_path;
  std::string json_path;
  bool full_mwf = false;
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

void run_eval(const EvalOptions& opt) {
  const auto manifests = find_scene_manifests(opt.data_dir);
  if (manifests.empty()) throw DataError("eval: empty dataset");
  std::vector<scene::SceneOutput> scenes;
  for (const auto& path : manifests) scenes.push_back(load_scene(path));

  std::shared_ptr<unet::UNetModel> model;
  if (!opt.checkpoint_path.empty())
    model = std::make_shared<unet::UNetModel>(
        io::load_checkpoint(opt.checkpoint_path).model);

  const bool gevd = !opt.full_mwf;
  using metrics::SystemOutput;
  std::vector<std::pair<std::string, metrics::System>> systems;
  systems.emplace_back("mixture", [](const scene::SceneOutput& sc) {
    return SystemOutput{sc.mixture.channel(0), std::nullopt};
  });
  systems.emplace_back("beamformer", [](const scene::SceneOutput& sc) {
    return SystemOutput{beamformer_output(sc.mixture, sc.spec), std::nullopt};
  });
  systems.emplace_back("ideal_mask", [](const scene::SceneOutput& sc) {
    return SystemOutput{mask_w_channel(sc.mixture, sc.oracle_mask),
                        sc.oracle_mask};
  });
  systems.emplace_back("mwf_ideal", [gevd](const scene::SceneOutput& sc) {
    return SystemOutput{filter_with_mask(sc.mixture, sc.oracle_mask, gevd),
                        sc.oracle_mask};
  });
  if (model) {
    systems.emplace_back("learned_mask", [model](const scene::SceneOutput& sc) {
      masks::Mask m = net_mask(*model, sc.mixture, sc.spec);
      return SystemOutput{mask_w_channel(sc.mixture, m), std::move(m)};
    });
    systems.emplace_back(
        "learned_filter", [model, gevd](const scene::SceneOutput& sc) {
          masks::Mask m = net_mask(*model, sc.mixture, sc.spec);
          return SystemOutput{filter_with_mask(sc.mixture, m, gevd),
                              std::move(m)};
        });
  }

  std::vector<std::pair<std::string, metrics::EvalReport>> reports;
  for (const auto& [name, system] : systems)
    reports.emplace_back(name, metrics::evaluate_pipeline(scenes, system));

  // Human-readable table.
  std::ostringstream table;
  table << "scenes " << scenes.size() << "\n\n";
  table << "system          scenes  si_sdr_db  improvement_db  mask_mse\n";
  for (const auto& [name, rep] : reports) {
    char row[160];
    std::snprintf(row, sizeof(row), "%-15s %6zu %10s %15s %9s\n", name.c_str(),
                  scenes.size(), num(rep.si_sdr_db).c_str(),
                  num(rep.si_sdr_improvement_db).c_str(),
                  rep.mask_mse ? num(*rep.mask_mse).c_str() : "-");
    table << row;
  }
  for (std::size_t g = 0; g < reports[0].second.groups.size(); ++g) {
    const auto& head = reports[0].second.groups[g];
    table << "\n[speakers=" << head.speakers
          << " separation=" << head.separation_deg
          << "deg scenes=" << head.scenes << "]\n";
    table << "system          si_sdr_db  improvement_db\n";
    for (const auto& [name, rep] : reports) {
      const auto& grp = rep.groups[g];
      char row[120];
      std::snprintf(row, sizeof(row), "%-15s %10s %15s\n", name.c_str(),
                    num(grp.si_sdr_db).c_str(),
                    num(grp.si_sdr_improvement_db).c_str());
      table << row;
    }
  }

  // Machine-readable mirror, field for field.
  nlohmann::json out;
  out["scenes"] = scenes.size();
  out["systems"] = nlohmann::json::array();
  for (const auto& [name, rep] : reports) {
    nlohmann::json sys;
    sys["name"] = name;
    sys["scenes"] = scenes.size();
    sys["si_sdr_db"] = rep.si_sdr_db;
    sys["si_sdr_mixture_db"] = rep.si_sdr_mixture_db;
    sys["improvement_db"] = rep.si_sdr_improvement_db;
    if (rep.mask_mse)
      sys["mask_mse"] = *rep.mask_mse;
    else
      sys["mask_mse"] = nullptr;
    sys["groups"] = nlohmann::json::array();
    for (const auto& grp : rep.groups) {
      sys["groups"].push_back({{"speakers", grp.speakers},
                               {"separation_deg", grp.separation_deg},
                               {"scenes", grp.scenes},
                               {"si_sdr_db", grp.si_sdr_db},
                               {"improvement_db", grp.si_sdr_improvement_db}});
    }
    out["systems"].push_back(std::move(sys));
  }

  std::cout << table.str();
  if (!opt.table_path.empty()) io::atomic_write_bytes(opt.table_path, table.str());
  if (!opt.json_path.empty()) io::atomic_write_bytes(opt.json_path, out.dump(2) + "\n");
}

}  // namespace

void register_cmd_eval(CLI::App& app) {
  auto opt = std::make_shared<EvalOptions>();
  CLI::App* cmd = app.add_subcommand(
      "eval", "Compare enhancement systems over a test scene directory");
  cmd->add_option("--data", opt->data_dir, "Scene dataset directory")
      ->required();
  cmd->add_option("--checkpoint", opt->checkpoint_path,
                  "Trained model for the learned-system rows");
  cmd->add_option("--out-table", opt->table_path, "Human-readable report");
  cmd->add_option("--out-json", opt->json_path, "Machine-readable report");
  cmd->add_flag("--full-mwf", opt->full_mwf,
                "Use the full MWF instead of the rank-1 GEVD variant");
  cmd->callback([opt] { run_eval(*opt); });
}

}  // namespace foamask::cli
