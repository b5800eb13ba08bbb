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

#ifndef WDC_CODEC_TRAINING_H_
#define WDC_CODEC_TRAINING_H_

#include <memory>
#include <vector>

#include "wdc/autodiff/params.h"
#include "wdc/codec/config.h"
#include "wdc/features/features.h"
#include "wdc/imgsig/plane.h"
#include "wdc/wdmetric/sigma.h"
#include "wdc/wdmetric/wd_graph.h"

namespace wdc::codec {

// What the codec is optimised against: the source image and, for WD, the
// feature backend, the sigma map and the precomputed reference statistics.
struct DistortionTarget {
  Distortion kind = Distortion::kMse;
  imgsig::PixelImage image;
  wd::SigmaMap sigma;
  std::shared_ptr<const features::FeatureExtractor> fx;
  wd::WdTarget wd;
  int wd_scales = wd::kDefaultScales;

  // Distortion of a reconstruction under this target (not differentiable).
  double Evaluate(const imgsig::PixelImage& reconstruction) const;
};

// For WD, sigma defaults to cfg.sigma resolved at the image size.
DistortionTarget MakeDistortionTarget(const imgsig::PixelImage& image, const CodecConfig& cfg,
                                      const wd::SigmaMap* sigma = nullptr);

struct TraceEntry {
  int step;
  bool rounding;  // straight-through phase
  double loss;
  double rate_bpp;
  double distortion;
};

struct TrainResult {
  ad::ParamSet state;
  std::vector<TraceEntry> trace;
  // Loss of the returned state with rounded latents.
  double final_loss = 0.0;
};

// Minimises rate (latent bits per pixel under the entropy model) plus
// lambda times distortion with Adam. The first noise_fraction of the steps
// use additive uniform noise, the rest straight-through rounding; during the
// rounding phase the state with the lowest loss is kept. Throws ValueError
// naming the step if the loss becomes non-finite.
TrainResult RdOptimize(const DistortionTarget& target, const CodecConfig& cfg);

}  // namespace wdc::codec

#endif  // WDC_CODEC_TRAINING_H_
