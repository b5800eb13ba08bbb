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

#ifndef WDC_CODEC_SYNTHESIS_H_
#define WDC_CODEC_SYNTHESIS_H_

#include <map>
#include <string>

#include "wdc/autodiff/graph.h"
#include "wdc/autodiff/params.h"
#include "wdc/codec/config.h"
#include "wdc/codec/state.h"
#include "wdc/imgsig/plane.h"

namespace wdc::codec {

// Applies the synthesis stack ("syn.w<k>", "syn.b<k>") to the upsampled
// input. Convolutions use reflect padding. The output is not clamped.
// Throws ShapeError when the input channel count does not match.
imgsig::Tensor Synthesize(const imgsig::Tensor& features, const ad::ParamSet& nets,
                          const CodecConfig& cfg);

ad::NodeId BuildSynthesisGraph(ad::Graph& g, ad::NodeId features, const CodecConfig& cfg,
                               const std::map<std::string, ad::NodeId>& p);

// Clamps every value to [0, 1].
imgsig::Tensor ClampToUnit(imgsig::Tensor t);

// Decoder-side reconstruction from quantised latents and (dequantised)
// networks: upsample and concatenate, synthesise, clamp.
imgsig::PixelImage Reconstruct(const LatentStack& latents, const ad::ParamSet& nets,
                               const CodecConfig& cfg, int height, int width);

}  // namespace wdc::codec

#endif  // WDC_CODEC_SYNTHESIS_H_
