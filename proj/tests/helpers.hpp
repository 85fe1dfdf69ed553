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

#ifndef FOAMASK_TESTS_HELPERS_HPP_
#define FOAMASK_TESTS_HELPERS_HPP_

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <string>

#include "foamask/masks.hpp"
#include "foamask/rng.hpp"
#include "foamask/stft.hpp"

namespace foamask::test {

// Scratch directory removed on scope exit.
class TempDir {
 public:
  explicit TempDir(const std::string& tag) {
    static int counter = 0;
    path_ = std::filesystem::temp_directory_path() /
            ("foamask_" + tag + "_" + std::to_string(++counter) + "_" +
             std::to_string(static_cast<unsigned>(::getpid())));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  std::string str() const { return path_.string(); }
  std::string file(const std::string& name) const {
    return (path_ / name).string();
  }

 private:
  std::filesystem::path path_;
};

inline double rel_err(double got, double want) {
  const double scale = std::max(std::abs(want), 1e-30);
  return std::abs(got - want) / scale;
}

inline Channel rand_channel(Rng& rng, std::size_t n, float amp = 0.5f) {
  Channel c(n);
  for (auto& v : c) v = amp * static_cast<float>(rng.gaussian());
  return c;
}

inline stft::Spectrogram rand_spec(Rng& rng, int channels, int frames,
                                   const stft::StftConfig& cfg,
                                   float amp = 1.0f) {
  stft::Spectrogram s(cfg, channels, frames);
  for (auto& v : s.data)
    v = {amp * static_cast<float>(rng.gaussian()),
         amp * static_cast<float>(rng.gaussian())};
  return s;
}

inline masks::Mask rand_mask(Rng& rng, int frames, int bins) {
  masks::Mask m(frames, bins);
  for (auto& v : m.data) v = static_cast<float>(rng.uniform());
  return m;
}

// Runs a shell command, capturing interleaved stdout/stderr and exit code.
struct CmdResult {
  int status = -1;
  std::string output;
};

inline CmdResult run_cmd(const std::string& cmd) {
  CmdResult r;
  FILE* pipe = ::popen((cmd + " 2>&1").c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t n;
  while ((n = ::fread(buf, 1, sizeof buf, pipe)) > 0) r.output.append(buf, n);
  const int rc = ::pclose(pipe);
  r.status = (rc >= 0 && WIFEXITED(rc)) ? WEXITSTATUS(rc) : -1;
  return r;
}

}  // namespace foamask::test

#endif  // FOAMASK_TESTS_HELPERS_HPP_
