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

#ifndef WDC_CODEC_STATE_H_
#define WDC_CODEC_STATE_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wdc/autodiff/graph.h"
#include "wdc/autodiff/params.h"
#include "wdc/codec/config.h"
#include "wdc/imgsig/plane.h"

namespace wdc::codec {

// Latent arrays, finest (array 1) first.
struct LatentStack {
  std::vector<imgsig::Plane> arrays;
  bool quantized = false;

  int size() const { return static_cast<int>(arrays.size()); }
  size_t ElementCount() const;
};

struct TensorSpec {
  std::string name;
  ad::Shape shape;
};

// Network tensors in their fixed bitstream order: the entropy network
// ("ent.*") then the synthesis network ("syn.*").
std::vector<TensorSpec> NetworkTensors(const CodecConfig& cfg);

// Latent parameter name for 1-based array n.
std::string LatentName(int n);

// Trainable state: "latent.1".."latent.N" as [1, h, w] arrays, then the
// network tensors. Latents start at zero and weights are seeded from
// cfg.seed. Throws ConfigError when the image cannot hold N arrays.
ad::ParamSet InitState(int height, int width, const CodecConfig& cfg);

LatentStack ExtractLatents(const ad::ParamSet& state, int num_arrays);
// Rounds half away from zero (the straight-through rounding of training).
LatentStack QuantizeLatents(const LatentStack& latents);

// Common randomness for array n (1-based): cr_channels standard normal
// planes at that array's resolution, derived from (seed, n).
imgsig::Tensor CrArray(uint64_t seed, int n, int height, int width, int channels);

// Synthesis input: every latent array bilinearly resized to H x W, coarse to
// fine, followed by the resized noise arrays, coarse to fine.
imgsig::Tensor UpsampleConcat(const LatentStack& latents, uint64_t cr_seed,
                              const CodecConfig& cfg, int height, int width);

// Graph parameter nodes for every tensor in params, by name.
std::map<std::string, ad::NodeId> AddParamNodes(ad::Graph& g, const ad::ParamSet& params);

}  // namespace wdc::codec

#endif  // WDC_CODEC_STATE_H_
