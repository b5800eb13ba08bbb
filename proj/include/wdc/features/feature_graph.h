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

#ifndef WDC_FEATURES_FEATURE_GRAPH_H_
#define WDC_FEATURES_FEATURE_GRAPH_H_

#include <string>
#include <vector>

#include "wdc/autodiff/graph.h"
#include "wdc/features/features.h"

namespace wdc::features {

struct GraphFeature {
  std::string id;
  ad::NodeId node;
  double r;
};

// Depthwise 3x3 binomial, stride 2, reflect padding: the graph twin of
// imgsig::Downsample2x.
ad::NodeId Downsample2xNode(ad::Graph& g, ad::NodeId x);

// Appends the extractor's computation for the [3, H, W] node `image`,
// producing the same maps in the same order as FeatureExtractor::Extract.
std::vector<GraphFeature> BuildFeatureGraph(const FeatureExtractor& fx, ad::Graph& g,
                                            ad::NodeId image);

}  // namespace wdc::features

#endif  // WDC_FEATURES_FEATURE_GRAPH_H_
