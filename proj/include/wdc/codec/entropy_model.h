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

#ifndef WDC_CODEC_ENTROPY_MODEL_H_
#define WDC_CODEC_ENTROPY_MODEL_H_

#include <array>
#include <map>
#include <string>
#include <vector>

#include "wdc/autodiff/graph.h"
#include "wdc/autodiff/params.h"
#include "wdc/codec/state.h"
#include "wdc/coder/laplace.h"
#include "wdc/imgsig/plane.h"

namespace wdc::codec {

// The causal context of latent (i, j): the three neighbours (j-1..j+1) in
// each of rows i-2 and i-1, then (i, j-1). Out-of-bounds taps read zero.
// The first entropy layer is a 5x3 convolution centred on (i, j) whose
// kernel is zero outside these taps; a second input channel carries the
// per-array embedding through the centre tap only.
inline constexpr int kContextRows = 5;
inline constexpr int kContextCols = 3;
inline constexpr int kContextTaps = 7;
inline constexpr std::array<std::array<int, 2>, kContextTaps> kContextOffsets = {{
    {-2, -1}, {-2, 0}, {-2, 1}, {-1, -1}, {-1, 0}, {-1, 1}, {0, -1}}};
// Lower bound on the raw log-scale output, so b >= exp(-8).
inline constexpr double kMinLogScale = -8.0;

// Mask for "ent.w1", shape [hidden, 2, 5, 3].
ad::Array EntropyMask(int hidden);

struct LaplaceParams {
  double mu;
  double b;
};

// Entropy parameters of element (i, j) of 1-based array n given the
// quantised array z. Only z values before (i, j) in raster order are read.
// This scalar path is the one shared by encoder and decoder, so it fixes
// the summation order.
LaplaceParams EntropyParamsAt(const ad::ParamSet& nets, const imgsig::Plane& z, int n, int i,
                              int j);

struct EntropyPlanes {
  imgsig::Plane mu;
  imgsig::Plane b;
};
EntropyPlanes EntropyParams(const ad::ParamSet& nets, const imgsig::Plane& z, int n);

struct EntropyNodes {
  ad::NodeId mu;
  ad::NodeId b;
};
// Graph form of the entropy network applied to all of zhat ([1, h, w]) at
// once; `mask` is a constant node holding EntropyMask.
EntropyNodes BuildEntropyGraph(ad::Graph& g, ad::NodeId zhat, int n, ad::NodeId mask,
                               const std::map<std::string, ad::NodeId>& p);

struct RateBreakdown {
  double total_bits = 0.0;
  std::vector<double> per_array_bits;  // finest first
};

// Cross entropy of quantised latents under the model, sum of
// -log2(max(P(z), 2^-16)) with P the continuous Laplace mass.
RateBreakdown RateEstimate(const LatentStack& latents, const ad::ParamSet& nets);

// The exact cost the range coder is charged: integer table bits plus escape
// bits, with the tables the coder uses.
RateBreakdown CodedRateEstimate(const LatentStack& latents, const ad::ParamSet& nets);

// Integer table for one element.
coder::QuantizedCdf ElementTable(const LaplaceParams& p);

}  // namespace wdc::codec

#endif  // WDC_CODEC_ENTROPY_MODEL_H_
