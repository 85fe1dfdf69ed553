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

#ifndef FOAMASK_SRC_IO_BYTES_HPP_
#define FOAMASK_SRC_IO_BYTES_HPP_

#include <cstdint>
#include <cstring>
#include <string>

#include "foamask/common.hpp"

namespace foamask::io {

// Little-endian binary encoding, independent of host byte order.
struct ByteWriter {
  std::string buf;

  void u8(std::uint8_t v) { buf.push_back(char(v)); }
  void u16(std::uint16_t v) {
    for (int i = 0; i < 2; ++i) buf.push_back(char((v >> (8 * i)) & 0xFF));
  }
  void u32(std::uint32_t v) {
    for (int i = 0; i < 4; ++i) buf.push_back(char((v >> (8 * i)) & 0xFF));
  }
  void u64(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) buf.push_back(char((v >> (8 * i)) & 0xFF));
  }
  void f32(float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    u32(bits);
  }
  void f64(double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    u64(bits);
  }
  void raw(const void* p, std::size_t n) {
    buf.append(static_cast<const char*>(p), n);
  }
  void str(const std::string& s) {
    u32(std::uint32_t(s.size()));
    buf.append(s);
  }
};

struct ByteReader {
  const std::string& buf;
  std::size_t pos = 0;
  std::string context;

  ByteReader(const std::string& b, std::string ctx)
      : buf(b), context(std::move(ctx)) {}

  void need(std::size_t n) const {
    if (pos + n > buf.size()) throw DataError(context + ": truncated file");
  }
  std::uint8_t u8() {
    need(1);
    return std::uint8_t(buf[pos++]);
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = 0;
    for (int i = 0; i < 2; ++i) v |= std::uint16_t(std::uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t(std::uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= std::uint64_t(std::uint8_t(buf[pos++])) << (8 * i);
    return v;
  }
  float f32() {
    const std::uint32_t bits = u32();
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
  }
  double f64() {
    const std::uint64_t bits = u64();
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    need(n);
    std::string s = buf.substr(pos, n);
    pos += n;
    return s;
  }
  std::size_t remaining() const { return buf.size() - pos; }
};

}  // namespace foamask::io

#endif  // FOAMASK_SRC_IO_BYTES_HPP_
