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

#include "mathgcl/binary_io.hpp"

#include <array>
#include <bit>
#include <cstring>

#include "mathgcl/error.hpp"

namespace mathgcl {


namespace {

template <typename T>
std::array<unsigned char, sizeof(T)> to_le(T v) {
  std::array<unsigned char, sizeof(T)> out{};
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    out[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xffu);
  }
  return out;
}

template <typename T>
T from_le(const unsigned char* p) {
  T v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<T>(p[i]) << (8 * i);
  return v;
}

}  // namespace

BinaryWriter::BinaryWriter(const std::filesystem::path& path)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw Error(ErrorCode::kIoError, "cannot write '" + path.string() + "'");
}

void BinaryWriter::bytes(const void* data, std::size_t n) {
  out_.write(static_cast<const char*>(data), static_cast<std::streamsize>(n));
}

void BinaryWriter::magic(std::string_view four_chars) { bytes(four_chars.data(), 4); }

void BinaryWriter::u32(std::uint32_t v) {
  const auto b = to_le(v);
  bytes(b.data(), b.size());
}

void BinaryWriter::u64(std::uint64_t v) {
  const auto b = to_le(v);
  bytes(b.data(), b.size());
}

void BinaryWriter::f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }

void BinaryWriter::f32s(std::span<const float> values) {
  for (float v : values) f32(v);
}

void BinaryWriter::string(std::string_view s) {
  u32(static_cast<std::uint32_t>(s.size()));
  bytes(s.data(), s.size());
}

void BinaryWriter::finish() {
  out_.flush();
  if (!out_) throw Error(ErrorCode::kIoError, "write failed for '" + path_.string() + "'");
}

BinaryReader::BinaryReader(const std::filesystem::path& path)
    : path_(path), in_(path, std::ios::binary) {
  if (!in_) throw Error(ErrorCode::kIoError, "cannot open '" + path.string() + "'");
}

void BinaryReader::bytes(void* data, std::size_t n) {
  in_.read(static_cast<char*>(data), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(in_.gcount()) != n) {
    throw Error(ErrorCode::kMalformedRecord, "unexpected end of file in '" + path_.string() + "'");
  }
}

void BinaryReader::expect_magic(std::string_view four_chars) {
  char got[4];
  bytes(got, 4);
  if (std::memcmp(got, four_chars.data(), 4) != 0) {
    throw Error(ErrorCode::kMalformedRecord,
                "'" + path_.string() + "' is not a " + std::string(four_chars) + " file");
  }
}

std::uint32_t BinaryReader::u32() {
  unsigned char b[4];
  bytes(b, 4);
  return from_le<std::uint32_t>(b);
}

std::uint64_t BinaryReader::u64() {
  unsigned char b[8];
  bytes(b, 8);
  return from_le<std::uint64_t>(b);
}

float BinaryReader::f32() { return std::bit_cast<float>(u32()); }

void BinaryReader::f32s(std::span<float> out) {
  for (float& v : out) v = f32();
}

std::string BinaryReader::string() {
  const std::uint32_t n = u32();
  if (n > (1u << 24)) {
    throw Error(ErrorCode::kMalformedRecord, "implausible string length in '" + path_.string() + "'");
  }
  std::string s(n, '\0');
  bytes(s.data(), n);
  return s;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace mathgcl
