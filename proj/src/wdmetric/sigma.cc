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

#include "wdc/wdmetric/sigma.h"

#include <algorithm>
#include <cmath>

#include "wdc/error.h"
#include "wdc/imgsig/image_io.h"
#include "wdc/imgsig/ops.h"

namespace wdc::wd {

void ValidateSigma(const SigmaMap& sigma) {
  for (double v : sigma.values()) {
    if (!std::isfinite(v) || v < 0) throw ValueError("sigma map values must be finite and >= 0");
  }
}

SigmaMap ConstantSigma(int height, int width, double sigma0) {
  if (!std::isfinite(sigma0) || sigma0 < 0) throw ValueError("constant sigma must be >= 0");
  return SigmaMap(height, width, sigma0);
}

imgsig::Plane SaliencyLikelihood(const imgsig::Plane& saliency, double p_min) {
  if (!(p_min > 0 && p_min <= 1)) throw ValueError("p_min must be in (0, 1]");
  for (double v : saliency.values()) {
    if (!(v >= 0 && v <= 1)) throw ValueError("saliency values must lie in [0, 1]");
  }
  const double mean = saliency.Mean();
  if (!(mean > 0)) throw ValueError("degenerate saliency: map is all zero");
  imgsig::Plane p(saliency.height(), saliency.width());
  auto in = saliency.values();
  auto out = p.values();
  for (size_t i = 0; i < in.size(); ++i) out[i] = p_min + (1.0 - p_min) * in[i] / mean;
  return p;
}

SigmaMap SigmaFromSaliency(const imgsig::Plane& saliency, double p_min, double sigma_max) {
  if (!(sigma_max > 0) || !std::isfinite(sigma_max)) throw ValueError("sigma_max must be > 0");
  imgsig::Plane p = SaliencyLikelihood(saliency, p_min);
  for (double& v : p.values()) v = sigma_max * p_min / v;
  return p;
}

imgsig::Plane AdaptSigma(const SigmaMap& sigma, double r, int height, int width) {
  imgsig::Plane scaled = sigma;
  for (double& v : scaled.values()) v *= r;
  imgsig::Plane out = imgsig::BilinearResize(scaled, height, width);
  for (double& v : out.values()) v = std::max(v, 1.0);
  return out;
}

double ScaleWeight(double adapted_sigma, int alpha, int top) {
  const double l = std::log2(adapted_sigma);
  if (alpha == top && l >= top) return 1.0;
  return std::max(1.0 - std::abs(l - alpha), 0.0);
}

imgsig::Plane WeightMap(const imgsig::Plane& adapted_sigma, int alpha, int top) {
  imgsig::Plane w(adapted_sigma.height(), adapted_sigma.width());
  auto s = adapted_sigma.values();
  auto o = w.values();
  for (size_t i = 0; i < s.size(); ++i) o[i] = ScaleWeight(s[i], alpha, top);
  return w;
}

SigmaMap ResolveSigmaSource(const std::string& source, int height, int width,
                            double display_scale) {
  if (!(display_scale > 0) || !std::isfinite(display_scale)) {
    throw ConfigError("display scale must be positive");
  }
  SigmaMap sigma;
  if (source.rfind("const:", 0) == 0) {
    const std::string v = source.substr(6);
    size_t used = 0;
    double s0 = 0;
    try {
      s0 = std::stod(v, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != v.size()) throw ConfigError("bad sigma value in '" + source + "'");
    sigma = ConstantSigma(height, width, s0);
  } else if (source.rfind("saliency:", 0) == 0) {
    imgsig::Plane s = imgsig::ReadGrayImage(source.substr(9));
    if (s.height() != height || s.width() != width) s = imgsig::BilinearResize(s, height, width);
    sigma = SigmaFromSaliency(s);
  } else {
    throw ConfigError("sigma source must be const:V or saliency:PATH, got '" + source + "'");
  }
  for (double& v : sigma.values()) v /= display_scale;
  return sigma;
}

}  // namespace wdc::wd
