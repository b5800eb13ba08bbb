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

#ifndef WDC_FEATURES_FILTERBANK_H_
#define WDC_FEATURES_FILTERBANK_H_

#include <array>
#include <string_view>

#include "wdc/imgsig/ops.h"

namespace wdc::features {

inline constexpr int kFilterSize = 5;
inline constexpr int kFilterCount = 8;

// One fixed 5x5 correlation kernel, stored row-major. Every kernel has unit
// L1 norm; all but the identity sum to zero.
struct FilterKernel {
  std::string_view name;
  std::array<double, kFilterSize * kFilterSize> taps;
};

// identity, d/dx, d/dy, laplacian, gabor even/odd at 0 and 90 degrees.
const std::array<FilterKernel, kFilterCount>& FilterbankKernels();

// Grouped weights applying the band kernels (all but identity) to each of
// `channels` inputs: output channel c * 7 + k uses band kernel k + 1 on input
// channel c. Use with groups = channels.
imgsig::WeightBank BandWeights(int channels);

}  // namespace wdc::features

#endif  // WDC_FEATURES_FILTERBANK_H_
