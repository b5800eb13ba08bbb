// Copyright 2026 The WDC Authors.
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

#include "wdc/features/weight_container.h"

#include "wdc/bytes.h"
#include "wdc/error.h"

namespace wdc::features {
namespace {

constexpr char kMagic[4] = {'W', 'T', 'C', '1'};
constexpr uint32_t kMaxRank = 8;

size_t Count(const std::vector<int>& shape) {
  size_t n = 1;
  for (int d : shape) n *= static_cast<size_t>(d);
  return n;
}

}  // namespace

void WeightContainer::Add(NamedTensor t) {
  if (t.name.empty()) throw FormatError("tensor with empty name");
  if (Find(t.name)) throw FormatError("duplicate name '" + t.name + "'");
  for (int d : t.shape) {
    if (d <= 0) throw FormatError("tensor '" + t.name + "' has a non-positive dimension");
  }
  if (t.shape.size() > kMaxRank) throw FormatError("tensor '" + t.name + "' has rank > 8");
  if (Count(t.shape) != t.data.size()) {
    throw FormatError("tensor '" + t.name + "' data size does not match its shape");
  }
  tensors_.push_back(std::move(t));
}

const NamedTensor* WeightContainer::Find(const std::string& name) const {
  for (const auto& t : tensors_) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

const NamedTensor& WeightContainer::Get(const std::string& name) const {
  const NamedTensor* t = Find(name);
  if (!t) throw ConfigError("weight container has no tensor '" + name + "'");
  return *t;
}

std::vector<uint8_t> SerializeWeights(const WeightContainer& c) {
  ByteWriter w;
  w.Str(std::string(kMagic, 4));
  w.U32(static_cast<uint32_t>(c.tensors().size()));
  for (const auto& t : c.tensors()) {
    const size_t start = w.size();
    w.U32(static_cast<uint32_t>(t.name.size()));
    w.Str(t.name);
    w.U32(static_cast<uint32_t>(t.shape.size()));
    for (int d : t.shape) w.U32(static_cast<uint32_t>(d));
    for (float v : t.data) w.F32(v);
    w.U32(Crc32(std::span<const uint8_t>(w.bytes()).subspan(start)));
  }
  return w.Take();
}

WeightContainer ParseWeights(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  WeightContainer c;
  try {
    if (r.Str(4) != std::string(kMagic, 4)) throw FormatError("bad magic, expected WTC1");
  } catch (const DecodeError&) {
    throw FormatError("truncated weight container header");
  }
  uint32_t count = 0;
  try {
    count = r.U32();
  } catch (const DecodeError&) {
    throw FormatError("truncated weight container header");
  }
  for (uint32_t i = 0; i < count; ++i) {
    std::string label = "record " + std::to_string(i);
    try {
      const size_t start = r.position();
      NamedTensor t;
      const uint32_t name_len = r.U32();
      if (name_len == 0 || name_len > 4096) throw FormatError("bad name length");
      t.name = r.Str(name_len);
      label += " '" + t.name + "'";
      const uint32_t rank = r.U32();
      if (rank > kMaxRank) throw FormatError("bad rank " + std::to_string(rank));
      size_t n = 1;
      for (uint32_t k = 0; k < rank; ++k) {
        const uint32_t d = r.U32();
        if (d == 0 || d > (1u << 28)) throw FormatError("bad dimension " + std::to_string(d));
        t.shape.push_back(static_cast<int>(d));
        n *= d;
        if (n > (size_t{1} << 31)) throw FormatError("tensor too large");
      }
      if (n * 4 > r.remaining()) throw DecodeError("truncated tensor data", r.position());
      t.data.resize(n);
      for (float& v : t.data) v = r.F32();
      const uint32_t expect = Crc32(bytes.subspan(start, r.position() - start));
      if (r.U32() != expect) throw FormatError("checksum mismatch");
      c.Add(std::move(t));
    } catch (const DecodeError& e) {
      throw FormatError(label + ": truncated");
    } catch (const FormatError& e) {
      throw FormatError(label + ": " + e.what());
    }
  }
  if (r.remaining() != 0) throw FormatError("trailing bytes after last record");
  return c;
}

WeightContainer LoadWeightContainer(const std::string& path) {
  std::vector<uint8_t> bytes = ReadFileBytes(path);
  try {
    return ParseWeights(bytes);
  } catch (const FormatError& e) {
    throw FormatError("'" + path + "': " + e.what());
  }
}

void SaveWeightContainer(const WeightContainer& c, const std::string& path) {
  WriteFileBytes(path, SerializeWeights(c));
}

}  // namespace wdc::features
