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

#ifndef WDC_FEATURES_FEATURES_H_
#define WDC_FEATURES_FEATURES_H_

#include <string>
#include <vector>

#include "wdc/imgsig/ops.h"
#include "wdc/imgsig/plane.h"

namespace wdc::features {

enum class BackendKind { kFilterbank, kConvnet };

struct BackendSpec {
  BackendKind kind = BackendKind::kFilterbank;
  // Convnet only: WTC1 file and the layers whose activations become features
  // (all layers when empty).
  std::string weights_path;
  std::vector<std::string> layers;
  // Image scales; each must be a power of 1/2 and 1 must be present.
  std::vector<double> scales = {1.0, 0.5, 0.25};

  // Throws ConfigError.
  void Validate() const;
  // Round-trips through ParseBackendSpec.
  std::string Describe() const;
};

// "filterbank", "filterbank@1,0.5", "convnet:PATH", "convnet:PATH#l1,l2@1,0.5".
BackendSpec ParseBackendSpec(const std::string& text);

struct FeatureMap {
  std::string id;
  imgsig::Tensor tensor;
  double r = 1.0;  // map width / image width
};

struct FeatureSet {
  std::vector<FeatureMap> maps;
  int FeatureCount() const;
};

// A conv layer of the convnet backend, read from "<name>.weight" [O,I,KH,KW],
// "<name>.bias" [O] and optionally "<name>.stride" [1]. Each is followed by
// ReLU and uses zero padding.
struct ConvLayer {
  std::string name;
  imgsig::WeightBank bank;
  int stride = 1;
  bool emit = true;
};

// Multi-scale feature extraction. Scale s images come from repeated 2x
// binomial downsampling. The first map is always the full-resolution
// pixels. The filterbank backend then emits, per scale and per stride in
// {1, 2}, an identity map (skipped at scale 1, stride 1) and a 21-channel
// band map, with r = scale / stride.
class FeatureExtractor {
 public:
  explicit FeatureExtractor(BackendSpec spec = {});

  FeatureSet Extract(const imgsig::PixelImage& img) const;

  const BackendSpec& spec() const { return spec_; }
  const std::vector<ConvLayer>& layers() const { return layers_; }
  // Number of 2x downsamplings for each entry of spec().scales.
  std::vector<int> ScaleLevels() const;

 private:
  BackendSpec spec_;
  std::vector<ConvLayer> layers_;
};

// Channel names of the filterbank band map, in channel order.
std::vector<std::string> BandChannelNames(int channels);

}  // namespace wdc::features

#endif  // WDC_FEATURES_FEATURES_H_
