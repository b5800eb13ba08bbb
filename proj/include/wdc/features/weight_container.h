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

#ifndef WDC_FEATURES_WEIGHT_CONTAINER_H_
#define WDC_FEATURES_WEIGHT_CONTAINER_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace wdc::features {

struct NamedTensor {
  std::string name;
  std::vector<int> shape;
  std::vector<float> data;
};

// In-memory form of a WTC1 file. Layout, all little-endian:
//   "WTC1"  u32 record_count
//   per record: u32 name_len, name bytes, u32 rank, rank x u32 dims,
//               f32 data[prod(dims)], u32 crc32 of the record bytes before it
class WeightContainer {
 public:
  // Throws FormatError "duplicate name" or on an inconsistent shape.
  void Add(NamedTensor t);
  const NamedTensor* Find(const std::string& name) const;
  const NamedTensor& Get(const std::string& name) const;  // ConfigError if absent
  const std::vector<NamedTensor>& tensors() const { return tensors_; }

 private:
  std::vector<NamedTensor> tensors_;
};

std::vector<uint8_t> SerializeWeights(const WeightContainer& c);
// Throws FormatError naming the offending record on bad magic, shape,
// checksum, duplicate name or truncation.
WeightContainer ParseWeights(std::span<const uint8_t> bytes);

WeightContainer LoadWeightContainer(const std::string& path);
void SaveWeightContainer(const WeightContainer& c, const std::string& path);

}  // namespace wdc::features

#endif  // WDC_FEATURES_WEIGHT_CONTAINER_H_
