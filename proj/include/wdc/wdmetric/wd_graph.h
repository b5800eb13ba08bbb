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

#ifndef WDC_WDMETRIC_WD_GRAPH_H_
#define WDC_WDMETRIC_WD_GRAPH_H_

#include <string>
#include <vector>

#include "wdc/autodiff/graph.h"
#include "wdc/features/features.h"
#include "wdc/wdmetric/sigma.h"
#include "wdc/wdmetric/wasserstein.h"

namespace wdc::wd {

// Reference-side quantities of WD for one feature map, precomputed once so
// training only differentiates through the reconstruction.
struct WdLevelTarget {
  int alpha;
  ad::Array mu;      // [C, h, w]
  ad::Array nu;      // [C, h, w]
  ad::Array weight;  // [C, h, w], the level weight replicated over channels
};

struct WdMapTarget {
  std::string id;
  int deepest;  // highest level with any non-zero weight
  std::vector<WdLevelTarget> levels;  // levels with non-zero weight only
};

struct WdTarget {
  int height = 0;
  int width = 0;
  int top = kDefaultScales;
  std::vector<WdMapTarget> maps;
};

WdTarget PrepareWdTarget(const imgsig::PixelImage& reference, const SigmaMap& sigma,
                         const features::FeatureExtractor& fx, int top = kDefaultScales);

// Appends the WD between the [3, H, W] node `image` and the prepared
// reference; returns a scalar node equal to WassersteinDistortion().total.
// `nu_eps` bounds the derivative of the local standard deviation near zero.
ad::NodeId BuildWdLoss(ad::Graph& g, ad::NodeId image, const WdTarget& target,
                       const features::FeatureExtractor& fx, double nu_eps = 1e-8);

}  // namespace wdc::wd

#endif  // WDC_WDMETRIC_WD_GRAPH_H_
