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

#include <exception>
#include <iostream>

#include <CLI11.hpp>

#include "commands.hpp"
#include "foamask/common.hpp"

int main(int argc, char** argv) {
  CLI::App app{"First-order Ambisonics speech enhancement toolkit"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Sectioned key-value config file");

  foamask::cli::register_cmd_simulate(app);
  foamask::cli::register_cmd_enhance(app);
  foamask::cli::register_cmd_train(app);
  foamask::cli::register_cmd_eval(app);
  foamask::cli::register_cmd_dump_mask(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const foamask::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const foamask::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const foamask::NumericalError& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
