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

#ifndef WDC_WDMETRIC_WASSERSTEIN_H_
#define WDC_WDMETRIC_WASSERSTEIN_H_

#include <string>
#include <vector>

#include "wdc/features/features.h"
#include "wdc/imgsig/plane.h"
#include "wdc/wdmetric/sigma.h"

namespace wdc::wd {

inline constexpr int kDefaultScales = 6;

struct WDReport {
  double total = 0.0;
  std::vector<std::string> feature_ids;  // "<map id>[<channel>]"
  std::vector<double> per_feature;       // d_i
  std::vector<double> per_scale;         // sum over i of the level-alpha term
  std::string sigma_source;
  std::string backend;
  int top_scale = kDefaultScales;

  // One key=value pair per line.
  std::string Serialize() const;
  // Throws FormatError.
  static WDReport Parse(const std::string& text);
};

// Wasserstein distortion between a and b. For every feature channel i of
// every map and every level alpha in 0..top, the local distance map is
// weighted by WeightMap(AdaptSigma(sigma, r_i)) and averaged over that
// level's own grid; the averages are summed over alpha and i. Throws
// ShapeError if a, b and sigma disagree in size.
WDReport WassersteinDistortion(const imgsig::PixelImage& a, const imgsig::PixelImage& b,
                               const SigmaMap& sigma, const features::FeatureExtractor& fx,
                               int top = kDefaultScales, const std::string& sigma_source = "");

// Same from precomputed feature sets (as returned by fx.Extract).
WDReport WassersteinDistortion(const features::FeatureSet& fa, const features::FeatureSet& fb,
                               const SigmaMap& sigma, int top = kDefaultScales);

struct MsePsnr {
  double mse = 0.0;
  double psnr = 0.0;  // +infinity when mse == 0
};
MsePsnr ComputeMsePsnr(const imgsig::PixelImage& a, const imgsig::PixelImage& b);

}  // namespace wdc::wd

#endif  // WDC_WDMETRIC_WASSERSTEIN_H_
