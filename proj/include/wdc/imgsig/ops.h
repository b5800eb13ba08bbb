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

#ifndef WDC_IMGSIG_OPS_H_
#define WDC_IMGSIG_OPS_H_

#include <array>
#include <cstdint>
#include <vector>

#include "wdc/imgsig/kernels.h"
#include "wdc/imgsig/plane.h"

namespace wdc::imgsig {

// The fixed downsampling filter D: outer product of [1, 2, 1] / 4 with itself.
inline constexpr std::array<double, 9> kBinomial3x3 = {
    1.0 / 16, 2.0 / 16, 1.0 / 16,  //
    2.0 / 16, 4.0 / 16, 2.0 / 16,  //
    1.0 / 16, 2.0 / 16, 1.0 / 16};

// Stride-2 correlation of the reflect-padded plane with kBinomial3x3.
// Output is ceil(h/2) x ceil(w/2).
Plane Downsample2x(const Plane& p);
// Same, applied to each channel independently.
Tensor Downsample2x(const Tensor& t);

// Half-pixel-centre bilinear resampling: the sample for output index o reads
// source coordinate (o + 0.5) * in / out - 0.5, clamped to the valid range.
// Resizing to the source shape is an exact identity.
Plane BilinearResize(const Plane& p, int height, int width);
Tensor BilinearResize(const Tensor& t, int height, int width);

// Convolution weights: out_channels x (in_channels / groups) x kh x kw, plus
// one bias per output channel (empty means zero bias).
struct WeightBank {
  int out_channels = 0;
  int in_per_group = 0;
  int kernel_h = 1;
  int kernel_w = 1;
  std::vector<double> weights;
  std::vector<double> bias;
};

struct ConvOptions {
  int stride = 1;
  int groups = 1;
  Padding padding = Padding::kZero;
};

// Cross-correlation: out_k = bias_k + sum_c in_c (*) kernel_{k,c}.
// Throws ShapeError when the bank does not match the input channel count.
Tensor Conv2d(const Tensor& input, const WeightBank& bank,
              const ConvOptions& options = {});

// Deterministic i.i.d. standard normal samples. Element k (CHW order) is
// derived from the counter pair (2*floor(k/2), 2*floor(k/2)+1) hashed with
// SplitMix64 under `seed`, turned into two uniforms and combined with the
// Box-Muller transform (cosine branch for even k, sine branch for odd k).
Tensor GaussianField(uint64_t seed, int height, int width, int channels);

// SplitMix64 finaliser, exposed for other counter-based draws.
uint64_t SplitMix64(uint64_t x);
// Uniform in (0, 1] from a 64-bit word (53 mantissa bits).
double UnitInterval(uint64_t bits);

}  // namespace wdc::imgsig

#endif  // WDC_IMGSIG_OPS_H_
