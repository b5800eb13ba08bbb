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

#include <cmath>
#include <numbers>

#include "wdc/imgsig/ops.h"

namespace wdc::imgsig {

uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

double UnitInterval(uint64_t bits) {
  return (static_cast<double>(bits >> 11) + 1.0) * 0x1.0p-53;
}

Tensor GaussianField(uint64_t seed, int height, int width, int channels) {
  Tensor out(channels, height, width);
  auto values = out.values();
  const uint64_t key = SplitMix64(seed);
  const size_t n = values.size();
  for (size_t pair = 0; 2 * pair < n; ++pair) {
    const double u1 = UnitInterval(SplitMix64(key ^ (2 * pair)));
    const double u2 = UnitInterval(SplitMix64(key ^ (2 * pair + 1)));
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    values[2 * pair] = radius * std::cos(angle);
    if (2 * pair + 1 < n) values[2 * pair + 1] = radius * std::sin(angle);
  }
  return out;
}

}  // namespace wdc::imgsig
