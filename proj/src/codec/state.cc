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

#include "wdc/codec/state.h"

#include <cmath>

#include "wdc/codec/entropy_model.h"
#include "wdc/error.h"
#include "wdc/imgsig/ops.h"

namespace wdc::codec {
namespace {

uint64_t NameHash(const std::string& s) {
  uint64_t h = 0x243f6a8885a308d3ull;
  for (unsigned char c : s) h = imgsig::SplitMix64(h ^ c);
  return h;
}

// He-style initialisation scaled down so the first steps stay gentle.
ad::Array RandomWeights(const TensorSpec& t, uint64_t seed) {
  ad::Array a(t.shape);
  const int fan_in = t.shape.size() == 4 ? t.shape[1] * t.shape[2] * t.shape[3] : 1;
  const double scale = 0.5 * std::sqrt(2.0 / fan_in);
  imgsig::Tensor n = imgsig::GaussianField(seed ^ NameHash(t.name), 1, static_cast<int>(a.size()), 1);
  for (size_t i = 0; i < a.size(); ++i) a.data[i] = scale * n.values()[i];
  return a;
}

}  // namespace

size_t LatentStack::ElementCount() const {
  size_t n = 0;
  for (const auto& a : arrays) n += a.size();
  return n;
}

std::string LatentName(int n) { return "latent." + std::to_string(n); }

std::vector<TensorSpec> NetworkTensors(const CodecConfig& cfg) {
  const int h = cfg.entropy_hidden;
  std::vector<TensorSpec> t = {
      {"ent.w1", {h, 2, kContextRows, kContextCols}},
      {"ent.b1", {h}},
      {"ent.w2", {h, h, 1, 1}},
      {"ent.b2", {h}},
      {"ent.w3", {2, h, 1, 1}},
      {"ent.b3", {2}},
      {"ent.embed", {cfg.num_arrays, 1, 1}},
  };
  int in = cfg.num_arrays * (1 + cfg.cr_channels);
  for (size_t k = 0; k < cfg.synthesis.size(); ++k) {
    const SynthLayer& l = cfg.synthesis[k];
    const std::string id = std::to_string(k + 1);
    t.push_back({"syn.w" + id, {l.out_channels, in, l.kernel, l.kernel}});
    t.push_back({"syn.b" + id, {l.out_channels}});
    in = l.out_channels;
  }
  return t;
}

ad::ParamSet InitState(int height, int width, const CodecConfig& cfg) {
  cfg.Validate();
  const auto shapes = LatentShapes(height, width, cfg.num_arrays);
  ad::ParamSet p;
  for (int n = 1; n <= cfg.num_arrays; ++n) {
    const auto [h, w] = shapes[n - 1];
    p.Add(LatentName(n), ad::Array({1, h, w}), cfg.latent_lr_scale);
  }
  const ad::Array mask = EntropyMask(cfg.entropy_hidden);
  const std::string last_bias = "syn.b" + std::to_string(cfg.synthesis.size());
  for (const TensorSpec& t : NetworkTensors(cfg)) {
    ad::Array a(t.shape);
    if (t.name == "ent.w1") {
      a = RandomWeights(t, cfg.seed);
      for (size_t i = 0; i < a.size(); ++i) a.data[i] *= mask.data[i];
    } else if (t.name == "ent.w2" || t.name == "ent.w3" || t.name.rfind("syn.w", 0) == 0) {
      a = RandomWeights(t, cfg.seed);
    } else if (t.name == last_bias) {
      a = ad::Array(t.shape, 0.5);  // start from mid grey
    }
    p.Add(t.name, std::move(a));
  }
  return p;
}

LatentStack ExtractLatents(const ad::ParamSet& state, int num_arrays) {
  LatentStack s;
  for (int n = 1; n <= num_arrays; ++n) {
    const ad::Array& a = state.Get(LatentName(n));
    s.arrays.emplace_back(a.shape[1], a.shape[2], a.data);
  }
  return s;
}

LatentStack QuantizeLatents(const LatentStack& latents) {
  LatentStack q = latents;
  for (auto& a : q.arrays) {
    for (double& v : a.values()) v = std::round(v);
  }
  q.quantized = true;
  return q;
}

imgsig::Tensor CrArray(uint64_t seed, int n, int height, int width, int channels) {
  return imgsig::GaussianField(imgsig::SplitMix64(seed) ^ static_cast<uint64_t>(n), height, width,
                               channels);
}

imgsig::Tensor UpsampleConcat(const LatentStack& latents, uint64_t cr_seed,
                              const CodecConfig& cfg, int height, int width) {
  const int n_arrays = latents.size();
  imgsig::Tensor out(n_arrays * (1 + cfg.cr_channels), height, width);
  int c = 0;
  for (int n = n_arrays; n >= 1; --n) {
    const imgsig::Plane up = imgsig::BilinearResize(latents.arrays[n - 1], height, width);
    out.set_plane(c++, up);
  }
  if (cfg.cr_channels == 0) return out;
  for (int n = n_arrays; n >= 1; --n) {
    const imgsig::Plane& a = latents.arrays[n - 1];
    const imgsig::Tensor cr = imgsig::BilinearResize(
        CrArray(cr_seed, n, a.height(), a.width(), cfg.cr_channels), height, width);
    for (int k = 0; k < cfg.cr_channels; ++k) out.set_plane(c++, cr.plane(k));
  }
  return out;
}

std::map<std::string, ad::NodeId> AddParamNodes(ad::Graph& g, const ad::ParamSet& params) {
  std::map<std::string, ad::NodeId> nodes;
  for (const auto& e : params) nodes[e.name] = g.Param(e.name, e.value.shape);
  return nodes;
}

}  // namespace wdc::codec
