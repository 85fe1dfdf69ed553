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
//
// Generates seeded speech-like mono WAVs for simulation and testing.

#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "foamask/io.hpp"
#include "foamask/signal.hpp"

namespace fs = std::filesystem;

int main(int argc, char** argv) {
  CLI::App app{"Synthetic speech-like source generator"};
  std::string out_dir;
  int count = 4;
  double seconds = 5.0;
  int sample_rate = 16000;
  std::uint64_t seed = 0;
  double fixed_f0 = 0.0;
  app.add_option("--out", out_dir, "Output directory")->required();
  app.add_option("--count", count, "Number of sources");
  app.add_option("--seconds", seconds, "Duration per source");
  app.add_option("--sample-rate", sample_rate, "Sample rate, Hz");
  app.add_option("--seed", seed, "Base seed");
  app.add_option("--f0", fixed_f0,
                 "Fixed pitch in Hz (steady harmonic tone instead of speech)");

  try {
    app.parse(argc, argv);
    fs::create_directories(out_dir);
    for (int i = 0; i < count; ++i) {
      const std::uint64_t s = seed + std::uint64_t(i);
      const foamask::Channel x =
          fixed_f0 > 0.0
              ? foamask::signal::harmonic_voiced(seconds, sample_rate,
                                                 fixed_f0, s)
              : foamask::signal::speech_like(seconds, sample_rate, s);
      char name[32];
      std::snprintf(name, sizeof(name), "src%02d.wav", i);
      const std::string path = (fs::path(out_dir) / name).string();
      foamask::io::write_wav(path, {x}, sample_rate);
      std::cout << path << "\n";
    }
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 1;
  } catch (const foamask::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
