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

#include "wdc/features/filterbank.h"

namespace wdc::features {

// The Gabor taps are exp(-(x^2 + y^2) / (2 * 1.25^2)) * {cos, sin}(2 pi x / 4)
// on a 5x5 grid, mean-removed and scaled to unit L1 norm; the 90 degree
// kernels are exact transposes of the 0 degree ones.
const std::array<FilterKernel, kFilterCount>& FilterbankKernels() {
  static const std::array<FilterKernel, kFilterCount> kernels = {{
      {"identity",
       {
       0, 0, 0, 0, 0,
       0, 0, 0, 0, 0,
       0, 0, 1, 0, 0,
       0, 0, 0, 0, 0,
       0, 0, 0, 0, 0,
       }},
      {"dx",
       {
       0, 0, 0, 0, 0,
       0, 0, 0, 0, 0,
       0, -0.5, 0, 0.5, 0,
       0, 0, 0, 0, 0,
       0, 0, 0, 0, 0,
       }},
      {"dy",
       {
       0, 0, 0, 0, 0,
       0, 0, -0.5, 0, 0,
       0, 0, 0, 0, 0,
       0, 0, 0.5, 0, 0,
       0, 0, 0, 0, 0,
       }},
      {"laplacian",
       {
       0, 0, 0, 0, 0,
       0, 0, 0.125, 0, 0,
       0, 0.125, -0.5, 0.125, 0,
       0, 0, 0.125, 0, 0,
       0, 0, 0, 0, 0,
       }},
      {"gabor_even_0",
       {
       -0.02384374179036268, -0.009743593728805431, 0.040969558925800072, -0.009743593728805431, -0.02384374179036268,
       -0.046568900695918305, -0.0097435937288054258, 0.122703768215396, -0.0097435937288054258, -0.046568900695918305,
       -0.060456746383410941, -0.0097435937288054258, 0.17265334571760801, -0.0097435937288054258, -0.060456746383410941,
       -0.046568900695918305, -0.0097435937288054258, 0.122703768215396, -0.0097435937288054258, -0.046568900695918305,
       -0.02384374179036268, -0.009743593728805431, 0.040969558925800072, -0.009743593728805431, -0.02384374179036268,
       }},
      {"gabor_odd_0",
       {
       0, -0.046210581348307272, 0, 0.046210581348307272, 0,
       0, -0.12068801234220622, 0, 0.12068801234220622, 0,
       0, -0.16620281261897285, 0, 0.16620281261897285, 0,
       0, -0.12068801234220622, 0, 0.12068801234220622, 0,
       0, -0.046210581348307272, 0, 0.046210581348307272, 0,
       }},
      {"gabor_even_90",
       {
       -0.02384374179036268, -0.046568900695918305, -0.060456746383410941, -0.046568900695918305, -0.02384374179036268,
       -0.009743593728805431, -0.0097435937288054258, -0.0097435937288054258, -0.0097435937288054258, -0.009743593728805431,
       0.040969558925800072, 0.122703768215396, 0.17265334571760801, 0.122703768215396, 0.040969558925800072,
       -0.009743593728805431, -0.0097435937288054258, -0.0097435937288054258, -0.0097435937288054258, -0.009743593728805431,
       -0.02384374179036268, -0.046568900695918305, -0.060456746383410941, -0.046568900695918305, -0.02384374179036268,
       }},
      {"gabor_odd_90",
       {
       0, 0, 0, 0, 0,
       -0.046210581348307272, -0.12068801234220622, -0.16620281261897285, -0.12068801234220622, -0.046210581348307272,
       0, 0, 0, 0, 0,
       0.046210581348307272, 0.12068801234220622, 0.16620281261897285, 0.12068801234220622, 0.046210581348307272,
       0, 0, 0, 0, 0,
       }},
  }};
  return kernels;
}

imgsig::WeightBank BandWeights(int channels) {
  constexpr int kBands = kFilterCount - 1;
  imgsig::WeightBank bank;
  bank.out_channels = channels * kBands;
  bank.in_per_group = 1;
  bank.kernel_h = kFilterSize;
  bank.kernel_w = kFilterSize;
  bank.weights.reserve(static_cast<size_t>(bank.out_channels) * kFilterSize * kFilterSize);
  for (int c = 0; c < channels; ++c) {
    for (int k = 1; k < kFilterCount; ++k) {
      const auto& taps = FilterbankKernels()[k].taps;
      bank.weights.insert(bank.weights.end(), taps.begin(), taps.end());
    }
  }
  return bank;
}

}  // namespace wdc::features
