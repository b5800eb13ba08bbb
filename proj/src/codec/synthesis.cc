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

#include "wdc/codec/synthesis.h"

#include <algorithm>

#include "wdc/imgsig/ops.h"

namespace wdc::codec {

imgsig::Tensor Synthesize(const imgsig::Tensor& features, const ad::ParamSet& nets,
                          const CodecConfig& cfg) {
  imgsig::Tensor x = features;
  for (size_t k = 0; k < cfg.synthesis.size(); ++k) {
    const std::string id = std::to_string(k + 1);
    const ad::Array& w = nets.Get("syn.w" + id);
    imgsig::WeightBank bank{w.shape[0], w.shape[1], w.shape[2], w.shape[3], w.data,
                            nets.Get("syn.b" + id).data};
    x = imgsig::Conv2d(x, bank, {1, 1, imgsig::Padding::kReflect});
    if (cfg.synthesis[k].relu) {
      for (double& v : x.values()) v = std::max(v, 0.0);
    }
  }
  return x;
}

ad::NodeId BuildSynthesisGraph(ad::Graph& g, ad::NodeId features, const CodecConfig& cfg,
                               const std::map<std::string, ad::NodeId>& p) {
  ad::NodeId x = features;
  for (size_t k = 0; k < cfg.synthesis.size(); ++k) {
    const std::string id = std::to_string(k + 1);
    x = g.Conv2d(x, p.at("syn.w" + id), p.at("syn.b" + id), 1, 1, imgsig::Padding::kReflect);
    if (cfg.synthesis[k].relu) x = g.Relu(x);
  }
  return x;
}

imgsig::Tensor ClampToUnit(imgsig::Tensor t) {
  for (double& v : t.values()) v = std::clamp(v, 0.0, 1.0);
  return t;
}

imgsig::PixelImage Reconstruct(const LatentStack& latents, const ad::ParamSet& nets,
                               const CodecConfig& cfg, int height, int width) {
  return ClampToUnit(Synthesize(UpsampleConcat(latents, cfg.cr_seed, cfg, height, width), nets, cfg));
}

}  // namespace wdc::codec
