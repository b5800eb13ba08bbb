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

#include "wdc/features/feature_graph.h"

#include <algorithm>
#include <sstream>

#include "wdc/error.h"
#include "wdc/features/filterbank.h"

namespace wdc::features {
namespace {

using ad::Array;
using ad::NodeId;

NodeId BankConstant(ad::Graph& g, const imgsig::WeightBank& bank) {
  return g.Constant(Array({bank.out_channels, bank.in_per_group, bank.kernel_h, bank.kernel_w},
                          bank.weights));
}

std::string ScaleLabel(double s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

}  // namespace

NodeId Downsample2xNode(ad::Graph& g, NodeId x) {
  const int c = g.shape(x).at(0);
  std::vector<double> w;
  for (int k = 0; k < c; ++k) w.insert(w.end(), imgsig::kBinomial3x3.begin(), imgsig::kBinomial3x3.end());
  NodeId k = g.Constant(Array({c, 1, 3, 3}, std::move(w)));
  return g.Conv2d(x, k, 2, c, imgsig::Padding::kReflect);
}

std::vector<GraphFeature> BuildFeatureGraph(const FeatureExtractor& fx, ad::Graph& g, NodeId image) {
  const ad::Shape& s = g.shape(image);
  if (s.size() != 3 || s[0] != 3) throw ShapeError("feature graph needs a [3,H,W] image node");
  const std::vector<int> levels = fx.ScaleLevels();
  std::vector<NodeId> pyramid{image};
  const int top = *std::max_element(levels.begin(), levels.end());
  for (int l = 1; l <= top; ++l) pyramid.push_back(Downsample2xNode(g, pyramid.back()));

  std::vector<GraphFeature> out;
  out.push_back({"pixels", image, 1.0});
  NodeId band = -1, ident = -1;
  for (size_t k = 0; k < levels.size(); ++k) {
    const double sc = fx.spec().scales[k];
    const NodeId x = pyramid[levels[k]];
    const std::string tag = "s" + ScaleLabel(sc);
    if (fx.spec().kind == BackendKind::kFilterbank) {
      if (band < 0) {
        band = BankConstant(g, BandWeights(3));
        ident = g.Constant(Array({3, 1, 1, 1}, 1.0));
      }
      for (int stride : {1, 2}) {
        const std::string sub = tag + "/x" + std::to_string(stride);
        if (!(levels[k] == 0 && stride == 1)) {
          NodeId id = stride == 1 ? x : g.Conv2d(x, ident, 2, 3, imgsig::Padding::kReflect);
          out.push_back({sub + "/identity", id, sc / stride});
        }
        out.push_back({sub + "/band", g.Conv2d(x, band, stride, 3, imgsig::Padding::kReflect),
                       sc / stride});
      }
    } else {
      NodeId a = x;
      int cum = 1;
      for (const ConvLayer& layer : fx.layers()) {
        NodeId w = BankConstant(g, layer.bank);
        NodeId b = g.Constant(Array({layer.bank.out_channels}, layer.bank.bias));
        a = g.Relu(g.Conv2d(a, w, b, layer.stride, 1, imgsig::Padding::kZero));
        cum *= layer.stride;
        if (layer.emit) out.push_back({tag + "/" + layer.name, a, sc / cum});
      }
    }
  }
  return out;
}

}  // namespace wdc::features
