// Copyright 2026 The mathgcl Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <string_view>

namespace mathgcl {

/// Little-endian writer for the binary artifact formats.
class BinaryWriter {
 public:
  explicit BinaryWriter(const std::filesystem::path& path);

  void magic(std::string_view four_chars);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void f32(float v);
  void f32s(std::span<const float> values);
  void string(std::string_view s);  // u32 length + bytes

  /// Flushes and throws Error(kIoError) if any write failed.
  void finish();

 private:
  void bytes(const void* data, std::size_t n);

  std::filesystem::path path_;
  std::ofstream out_;
};

class BinaryReader {
 public:
  explicit BinaryReader(const std::filesystem::path& path);

  /// Throws Error(kMalformedRecord) when the next four bytes differ.
  void expect_magic(std::string_view four_chars);
  std::uint32_t u32();
  std::uint64_t u64();
  float f32();
  void f32s(std::span<float> out);
  std::string string();

 private:
  void bytes(void* data, std::size_t n);

  std::filesystem::path path_;
  std::ifstream in_;
};

/// FNV-1a 64-bit over bytes; used for config hashes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

}  // namespace mathgcl
