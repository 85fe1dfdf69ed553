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

#ifndef FOAMASK_TOOLS_COMMANDS_HPP_
#define FOAMASK_TOOLS_COMMANDS_HPP_

#include <CLI11.hpp>

namespace foamask::cli {

void register_cmd_simulate(CLI::App& app);
void register_cmd_enhance(CLI::App& app);
void register_cmd_train(CLI::App& app);
void register_cmd_eval(CLI::App& app);
void register_cmd_dump_mask(CLI::App& app);

}  // namespace foamask::cli

#endif  // FOAMASK_TOOLS_COMMANDS_HPP_
