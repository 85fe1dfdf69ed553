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
#include <cmath>
#include <limits>
#include <sstream>

#include "foamask/io.hpp"

namespace foamask::io {
namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string fmt_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double v = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("bad numeric value for '" + key + "': " + value);
  }
}

}  // namespace

const std::string* Manifest::Section::find(const std::string& key) const {
  for (const auto& [k, v] : entries)
    if (k == key) return &v;
  return nullptr;
}

Manifest::Section& Manifest::add(const std::string& name) {
  sections.push_back({name, {}});
  return sections.back();
}

const Manifest::Section* Manifest::find(const std::string& name) const {
  for (const auto& s : sections)
    if (s.name == name) return &s;
  return nullptr;
}

Manifest parse_manifest(const std::string& text) {
  Manifest m;
  Manifest::Section* cur = nullptr;
  std::istringstream in(text);
  std::string raw;
  int lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    const std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("line " + std::to_string(lineno) +
                          ": unterminated section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (name.empty())
        throw ConfigError("line " + std::to_string(lineno) + ": empty section");
      if (m.find(name))
        throw ConfigError("duplicate section [" + name + "]");
      cur = &m.add(name);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": expected key = value");
    if (!cur)
      throw ConfigError("line " + std::to_string(lineno) +
                        ": entry before any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw ConfigError("line " + std::to_string(lineno) + ": empty key");
    if (cur->find(key))
      throw ConfigError("duplicate key '" + key + "' in [" + cur->name + "]");
    cur->entries.emplace_back(key, value);
  }
  return m;
}

std::string format_manifest(const Manifest& m) {
  std::ostringstream out;
  bool first = true;
  for (const auto& sec : m.sections) {
    if (!first) out << "\n";
    first = false;
    out << "[" << sec.name << "]\n";
    for (const auto& [k, v] : sec.entries) out << k << " = " << v << "\n";
  }
  return out.str();
}

bool SectionReader::has(const std::string& key) const {
  return sec_.find(key) != nullptr;
}

std::string SectionReader::get(const std::string& key) {
  const std::string* v = sec_.find(key);
  if (!v) throw ConfigError("[" + sec_.name + "] missing key '" + key + "'");
  used_.push_back(key);
  return *v;
}

std::string SectionReader::get_or(const std::string& key,
                                  const std::string& fallback) {
  if (!has(key)) return fallback;
  return get(key);
}

double SectionReader::get_double(const std::string& key) {
  return parse_double(key, get(key));
}

double SectionReader::get_double_or(const std::string& key, double fallback) {
  if (!has(key)) return fallback;
  return get_double(key);
}

int SectionReader::get_int(const std::string& key) {
  const double v = get_double(key);
  if (v != std::floor(v) || std::abs(v) > 2e9)
    throw ConfigError("'" + key + "' must be an integer");
  return int(v);
}

int SectionReader::get_int_or(const std::string& key, int fallback) {
  if (!has(key)) return fallback;
  return get_int(key);
}

std::uint64_t SectionReader::get_u64(const std::string& key) {
  const std::string v = get(key);
  try {
    std::size_t used = 0;
    const std::uint64_t out = std::stoull(v, &used);
    if (used != v.size()) throw std::invalid_argument("trailing");
    return out;
  } catch (const std::exception&) {
    throw ConfigError("bad unsigned value for '" + key + "': " + v);
  }
}

void SectionReader::close() const {
  for (const auto& [k, v] : sec_.entries) {
    if (std::find(used_.begin(), used_.end(), k) == used_.end())
      throw ConfigError("[" + sec_.name + "] unknown key '" + k + "'");
  }
}

namespace {

void put_direction(Manifest::Section& sec, const foa::Direction& d) {
  sec.entries.emplace_back("azimuth_deg", fmt_double(rad_to_deg(d.azimuth)));
  sec.entries.emplace_back("elevation_deg",
                           fmt_double(rad_to_deg(d.elevation)));
}

foa::Direction get_direction(SectionReader& r) {
  return foa::Direction::from_degrees(r.get_double("azimuth_deg"),
                                      r.get_double("elevation_deg"));
}

}  // namespace

void write_scene_manifest(const std::string& path, const SceneManifest& m) {
  Manifest out;
  auto& scene = out.add("scene");
  scene.entries.emplace_back("seed", std::to_string(m.spec.seed));
  scene.entries.emplace_back("snr_db", fmt_double(m.spec.snr_db));
  scene.entries.emplace_back("min_separation_deg",
                             fmt_double(m.spec.min_separation_deg));

  auto& stft_sec = out.add("stft");
  stft_sec.entries.emplace_back("frame_len", std::to_string(m.stft.frame_len));
  stft_sec.entries.emplace_back("hop", std::to_string(m.stft.hop));
  stft_sec.entries.emplace_back("sample_rate",
                                std::to_string(m.stft.sample_rate));

  if (m.spec.reverb) {
    auto& rev = out.add("reverb");
    rev.entries.emplace_back("rt60", fmt_double(m.spec.reverb->rt60));
    rev.entries.emplace_back("direct_to_reverb_db",
                             fmt_double(m.spec.reverb->direct_to_reverb_db));
  }

  auto& target = out.add("target");
  target.entries.emplace_back("id", m.spec.target.id);
  put_direction(target, m.spec.target.direction);

  for (std::size_t i = 0; i < m.spec.interferers.size(); ++i) {
    auto& sec = out.add("interferer" + std::to_string(i + 1));
    sec.entries.emplace_back("id", m.spec.interferers[i].id);
    put_direction(sec, m.spec.interferers[i].direction);
    sec.entries.emplace_back("sir_db", fmt_double(m.spec.sir_db[i]));
  }

  if (!m.files.empty()) {
    auto& files = out.add("files");
    for (const auto& [k, v] : m.files) files.entries.emplace_back(k, v);
  }

  atomic_write_bytes(path, format_manifest(out));
}

SceneManifest read_scene_manifest(const std::string& path) {
  const Manifest in = parse_manifest(read_bytes(path));
  SceneManifest m;

  const auto* scene_sec = in.find("scene");
  if (!scene_sec) throw ConfigError(path + ": missing [scene] section");
  SectionReader scene(*scene_sec);
  m.spec.seed = scene.get_u64("seed");
  m.spec.snr_db = scene.get_double("snr_db");
  m.spec.min_separation_deg = scene.get_double_or("min_separation_deg", 25.0);
  scene.close();

  const auto* stft_sec = in.find("stft");
  if (!stft_sec) throw ConfigError(path + ": missing [stft] section");
  SectionReader stft_r(*stft_sec);
  m.stft.frame_len = stft_r.get_int("frame_len");
  m.stft.hop = stft_r.get_int("hop");
  m.stft.sample_rate = stft_r.get_int("sample_rate");
  stft_r.close();
  m.stft.validate();

  const auto* target_sec = in.find("target");
  if (!target_sec) throw ConfigError(path + ": missing [target] section");
  SectionReader target(*target_sec);
  m.spec.target.id = target.get("id");
  m.spec.target.direction = get_direction(target);
  target.close();

  for (int i = 1; i <= 2; ++i) {
    const auto* sec = in.find("interferer" + std::to_string(i));
    if (!sec) {
      if (in.find("interferer" + std::to_string(i + 1)))
        throw ConfigError(path + ": interferer sections must be contiguous");
      break;
    }
    SectionReader r(*sec);
    scene::SceneSource src;
    src.id = r.get("id");
    src.direction = get_direction(r);
    m.spec.sir_db.push_back(r.get_double("sir_db"));
    r.close();
    m.spec.interferers.push_back(std::move(src));
  }

  if (const auto* rev_sec = in.find("reverb")) {
    SectionReader r(*rev_sec);
    scene::ReverbParams rev;
    rev.rt60 = r.get_double("rt60");
    rev.direct_to_reverb_db = r.get_double("direct_to_reverb_db");
    r.close();
    m.spec.reverb = rev;
  }

  if (const auto* files_sec = in.find("files")) {
    for (const auto& [k, v] : files_sec->entries) m.files[k] = v;
  }

  for (const auto& sec : in.sections) {
    static const char* known[] = {"scene",       "stft",        "reverb",
                                  "target",      "interferer1", "interferer2",
                                  "files"};
    if (std::find_if(std::begin(known), std::end(known), [&](const char* k) {
          return sec.name == k;
        }) == std::end(known))
      throw ConfigError(path + ": unknown section [" + sec.name + "]");
  }
  return m;
}

}  // namespace foamask::io
