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

#include "wdc/codec/training.h"

#include <cmath>
#include <string>

#include "wdc/autodiff/adam.h"
#include "wdc/autodiff/eval.h"
#include "wdc/codec/entropy_model.h"
#include "wdc/codec/state.h"
#include "wdc/codec/synthesis.h"
#include "wdc/error.h"
#include "wdc/imgsig/ops.h"
#include "wdc/wdmetric/wasserstein.h"

namespace wdc::codec {
namespace {

struct TrainingGraph {
  ad::Graph g;
  ad::NodeId rate_bpp;
  ad::NodeId distortion;
  ad::NodeId loss;
};

void BuildTrainingGraph(TrainingGraph& t, const ad::ParamSet& init, const DistortionTarget& target,
                        const CodecConfig& cfg) {
  ad::Graph& g = t.g;
  const int height = target.image.height(), width = target.image.width();
  const auto p = AddParamNodes(g, init);
  const ad::NodeId mask = g.Constant(EntropyMask(cfg.entropy_hidden));

  std::vector<ad::NodeId> zhat(cfg.num_arrays + 1);
  ad::NodeId bits = -1;
  for (int n = 1; n <= cfg.num_arrays; ++n) {
    zhat[n] = g.SoftQuantize(p.at(LatentName(n)));
    const EntropyNodes e = BuildEntropyGraph(g, zhat[n], n, mask, p);
    const ad::NodeId r = g.Sum(g.LaplaceRate(zhat[n], e.mu, e.b));
    bits = bits < 0 ? r : g.Add(bits, r);
  }
  t.rate_bpp = g.Mul(bits, g.Scalar(1.0 / (static_cast<double>(height) * width)));

  std::vector<ad::NodeId> channels;
  for (int n = cfg.num_arrays; n >= 1; --n) channels.push_back(g.Resize(zhat[n], height, width));
  for (int n = cfg.num_arrays; n >= 1 && cfg.cr_channels > 0; --n) {
    const ad::Shape& s = init.Get(LatentName(n)).shape;
    channels.push_back(g.Constant(ad::Array::FromTensor(imgsig::BilinearResize(
        CrArray(cfg.cr_seed, n, s[1], s[2], cfg.cr_channels), height, width))));
  }
  const ad::NodeId xhat = BuildSynthesisGraph(g, g.Concat(channels), cfg, p);

  if (target.kind == Distortion::kMse) {
    const ad::NodeId ref = g.Constant(ad::Array::FromTensor(target.image));
    t.distortion = g.Mean(g.Square(g.Sub(xhat, ref)));
  } else {
    t.distortion = wd::BuildWdLoss(g, xhat, target.wd, *target.fx);
  }
  t.loss = g.Add(t.rate_bpp, g.Mul(t.distortion, g.Scalar(cfg.lambda)));
}

}  // namespace

double DistortionTarget::Evaluate(const imgsig::PixelImage& reconstruction) const {
  if (kind == Distortion::kMse) return wd::ComputeMsePsnr(reconstruction, image).mse;
  return wd::WassersteinDistortion(reconstruction, image, sigma, *fx, wd_scales).total;
}

DistortionTarget MakeDistortionTarget(const imgsig::PixelImage& image, const CodecConfig& cfg,
                                      const wd::SigmaMap* sigma) {
  imgsig::ValidatePixelImage(image);
  DistortionTarget t;
  t.kind = cfg.distortion;
  t.image = image;
  if (cfg.distortion == Distortion::kWd) {
    t.sigma = sigma ? *sigma : wd::ResolveSigmaSource(cfg.sigma, image.height(), image.width());
    if (t.sigma.height() != image.height() || t.sigma.width() != image.width()) {
      throw ShapeError("sigma map size differs from the image");
    }
    t.fx = std::make_shared<features::FeatureExtractor>(features::ParseBackendSpec(cfg.backend));
    t.wd_scales = cfg.wd_scales;
    t.wd = wd::PrepareWdTarget(image, t.sigma, *t.fx, cfg.wd_scales);
  }
  return t;
}

TrainResult RdOptimize(const DistortionTarget& target, const CodecConfig& cfg) {
  cfg.Validate();
  TrainResult result;
  result.state = InitState(target.image.height(), target.image.width(), cfg);
  TrainingGraph t;
  BuildTrainingGraph(t, result.state, target, cfg);

  const int noise_steps = static_cast<int>(std::lround(cfg.steps * cfg.noise_fraction));
  ad::AdamState adam;
  ad::ParamSet best;
  double best_loss = INFINITY;
  for (int step = 0; step < cfg.steps; ++step) {
    const bool rounding = step >= noise_steps;
    ad::EvalContext ctx{cfg.seed, step, rounding ? ad::QuantMode::kRound : ad::QuantMode::kNoise, 1.0};
    const ad::Evaluation fw = ad::ForwardEval(t.g, result.state, {}, ctx);
    const double loss = fw.scalar(t.loss);
    if (!std::isfinite(loss)) {
      throw ValueError("non-finite loss at step " + std::to_string(step));
    }
    if (step % cfg.log_interval == 0 || step + 1 == cfg.steps) {
      result.trace.push_back({step, rounding, loss, fw.scalar(t.rate_bpp), fw.scalar(t.distortion)});
    }
    if (rounding && loss < best_loss) {
      best_loss = loss;
      best = result.state;
    }
    const ad::Gradients grads = ad::BackwardGrad(t.g, fw, t.loss);
    ad::AdamOptions opt;
    opt.lr = cfg.learning_rate * (rounding ? cfg.ste_lr_factor : 1.0);
    ad::AdamStep(result.state, grads, adam, opt);
  }

  // Score the final state too, then keep the better of it and the best seen.
  const ad::EvalContext ctx{cfg.seed, cfg.steps, ad::QuantMode::kRound, 1.0};
  const double last = ad::ForwardEval(t.g, result.state, {}, ctx).scalar(t.loss);
  if (!std::isfinite(last)) throw ValueError("non-finite loss at step " + std::to_string(cfg.steps));
  if (last <= best_loss) {
    best_loss = last;
  } else {
    result.state = std::move(best);
  }
  result.final_loss = best_loss;
  return result;
}

}  // namespace wdc::codec
