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

#ifndef WDC_WDMETRIC_SIGMA_H_
#define WDC_WDMETRIC_SIGMA_H_

#include <string>

#include "wdc/imgsig/plane.h"

namespace wdc::wd {

// Pooling-region size per pixel, in pixels. All values finite and >= 0.
using SigmaMap = imgsig::Plane;

inline constexpr double kDefaultPMin = 0.5;
inline constexpr double kDefaultSigmaMax = 16.0;

// Throws ValueError if any value is negative or not finite.
void ValidateSigma(const SigmaMap& sigma);

// Throws ValueError if sigma0 < 0.
SigmaMap ConstantSigma(int height, int width, double sigma0);

// Likelihood p = p_min + (1 - p_min) * s / mean(s); averages to one. Throws
// ValueError "degenerate saliency" when s is all zero and ValueError when s
// leaves [0, 1] or p_min is outside (0, 1].
imgsig::Plane SaliencyLikelihood(const imgsig::Plane& saliency, double p_min = kDefaultPMin);

// sigma = sigma_max * p_min / p.
SigmaMap SigmaFromSaliency(const imgsig::Plane& saliency, double p_min = kDefaultPMin,
                           double sigma_max = kDefaultSigmaMax);

// Per-feature sigma at a pyramid level: max(bilinear(r * sigma, h x w), 1).
imgsig::Plane AdaptSigma(const SigmaMap& sigma, double r, int height, int width);

// w = max(1 - |log2(sigma) - alpha|, 0). At the top level alpha == top, any
// sigma beyond 2^top also gets weight 1, so the weights over alpha = 0..top
// still sum to one.
imgsig::Plane WeightMap(const imgsig::Plane& adapted_sigma, int alpha, int top);
double ScaleWeight(double adapted_sigma, int alpha, int top);

// Builds a sigma map of the given size from "const:V" or "saliency:PATH"
// (an 8-bit grayscale raster, bilinearly resized when its size differs).
// Every value is then divided by display_scale, for images shown downscaled.
// Throws ConfigError on a malformed source and IoError/FormatError when the
// file cannot be read.
SigmaMap ResolveSigmaSource(const std::string& source, int height, int width,
                            double display_scale = 1.0);

}  // namespace wdc::wd

#endif  // WDC_WDMETRIC_SIGMA_H_
