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

#include "wdc/features/features.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wdc/error.h"
#include "wdc/features/filterbank.h"
#include "wdc/features/weight_container.h"

namespace wdc::features {
namespace {

int LevelOf(double scale) {
  const double l = -std::log2(scale);
  const double r = std::round(l);
  if (!(scale > 0 && scale <= 1) || std::abs(l - r) > 1e-9) {
    throw ConfigError("feature scale " + std::to_string(scale) + " is not a power of 1/2 in (0,1]");
  }
  return static_cast<int>(r);
}

std::string ScaleLabel(double s) {
  std::ostringstream os;
  os << s;
  return os.str();
}

std::vector<double> ParseScales(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad scale '" + item + "' in backend spec");
    }
  }
  return out;
}

imgsig::Tensor Relu(imgsig::Tensor t) {
  for (double& v : t.values()) v = std::max(v, 0.0);
  return t;
}

imgsig::Tensor Subsample2(const imgsig::Tensor& t) {
  imgsig::WeightBank id{t.channels(), 1, 1, 1, std::vector<double>(t.channels(), 1.0), {}};
  return imgsig::Conv2d(t, id, {2, t.channels(), imgsig::Padding::kReflect});
}

}  // namespace

void BackendSpec::Validate() const {
  if (scales.empty()) throw ConfigError("backend needs at least one scale");
  bool has_one = false;
  for (double s : scales) {
    if (LevelOf(s) == 0) has_one = true;
  }
  if (!has_one) throw ConfigError("backend scales must include 1");
  for (size_t i = 0; i < scales.size(); ++i) {
    for (size_t j = 0; j < i; ++j) {
      if (scales[i] == scales[j]) throw ConfigError("duplicate backend scale");
    }
  }
  if (kind == BackendKind::kConvnet && weights_path.empty()) {
    throw ConfigError("convnet backend needs a weights file");
  }
}

std::string BackendSpec::Describe() const {
  std::string s = kind == BackendKind::kFilterbank ? "filterbank" : "convnet:" + weights_path;
  if (kind == BackendKind::kConvnet && !layers.empty()) {
    s += "#";
    for (size_t i = 0; i < layers.size(); ++i) s += (i ? "," : "") + layers[i];
  }
  s += "@";
  for (size_t i = 0; i < scales.size(); ++i) s += (i ? "," : "") + ScaleLabel(scales[i]);
  return s;
}

BackendSpec ParseBackendSpec(const std::string& text) {
  BackendSpec spec;
  std::string rest = text;
  if (auto at = rest.rfind('@'); at != std::string::npos) {
    spec.scales = ParseScales(rest.substr(at + 1));
    rest = rest.substr(0, at);
  }
  if (rest == "filterbank") {
    spec.kind = BackendKind::kFilterbank;
  } else if (rest.rfind("convnet:", 0) == 0) {
    spec.kind = BackendKind::kConvnet;
    rest = rest.substr(8);
    if (auto hash = rest.find('#'); hash != std::string::npos) {
      std::stringstream ss(rest.substr(hash + 1));
      std::string layer;
      while (std::getline(ss, layer, ',')) {
        if (!layer.empty()) spec.layers.push_back(layer);
      }
      rest = rest.substr(0, hash);
    }
    spec.weights_path = rest;
  } else {
    throw ConfigError("unknown feature backend '" + text + "'");
  }
  spec.Validate();
  return spec;
}

int FeatureSet::FeatureCount() const {
  int n = 0;
  for (const auto& m : maps) n += m.tensor.channels();
  return n;
}

std::vector<std::string> BandChannelNames(int channels) {
  std::vector<std::string> names;
  for (int c = 0; c < channels; ++c) {
    for (int k = 1; k < kFilterCount; ++k) {
      names.push_back(std::string(FilterbankKernels()[k].name) + "[" + std::to_string(c) + "]");
    }
  }
  return names;
}

FeatureExtractor::FeatureExtractor(BackendSpec spec) : spec_(std::move(spec)) {
  spec_.Validate();
  if (spec_.kind != BackendKind::kConvnet) return;
  WeightContainer w = LoadWeightContainer(spec_.weights_path);
  for (const auto& t : w.tensors()) {
    const std::string suffix = ".weight";
    if (t.name.size() <= suffix.size() ||
        t.name.compare(t.name.size() - suffix.size(), suffix.size(), suffix) != 0) {
      continue;
    }
    ConvLayer layer;
    layer.name = t.name.substr(0, t.name.size() - suffix.size());
    if (t.shape.size() != 4) throw ConfigError("layer '" + layer.name + "' weight must be rank 4");
    layer.bank.out_channels = t.shape[0];
    layer.bank.in_per_group = t.shape[1];
    layer.bank.kernel_h = t.shape[2];
    layer.bank.kernel_w = t.shape[3];
    layer.bank.weights.assign(t.data.begin(), t.data.end());
    const NamedTensor& bias = w.Get(layer.name + ".bias");
    if (bias.shape != std::vector<int>{t.shape[0]}) {
      throw ConfigError("layer '" + layer.name + "' bias shape mismatch");
    }
    layer.bank.bias.assign(bias.data.begin(), bias.data.end());
    if (const NamedTensor* s = w.Find(layer.name + ".stride")) {
      layer.stride = static_cast<int>(s->data.at(0));
      if (layer.stride != 1 && layer.stride != 2) {
        throw ConfigError("layer '" + layer.name + "' stride must be 1 or 2");
      }
    }
    const int expect_in = layers_.empty() ? 3 : layers_.back().bank.out_channels;
    if (layer.bank.in_per_group != expect_in) {
      throw ConfigError("layer '" + layer.name + "' expects " +
                        std::to_string(layer.bank.in_per_group) + " input channels, chain gives " +
                        std::to_string(expect_in));
    }
    layer.emit = spec_.layers.empty() ||
                 std::find(spec_.layers.begin(), spec_.layers.end(), layer.name) != spec_.layers.end();
    layers_.push_back(std::move(layer));
  }
  if (layers_.empty()) throw ConfigError("weights file defines no conv layers");
  for (const auto& name : spec_.layers) {
    if (std::none_of(layers_.begin(), layers_.end(), [&](const ConvLayer& l) { return l.name == name; })) {
      throw ConfigError("selected layer '" + name + "' not in weights file");
    }
  }
}

std::vector<int> FeatureExtractor::ScaleLevels() const {
  std::vector<int> levels;
  for (double s : spec_.scales) levels.push_back(LevelOf(s));
  return levels;
}

FeatureSet FeatureExtractor::Extract(const imgsig::PixelImage& img) const {
  if (img.channels() != 3) throw ShapeError("feature extraction needs a 3-channel image");
  const std::vector<int> levels = ScaleLevels();
  std::vector<imgsig::Tensor> pyramid{img};
  const int top = *std::max_element(levels.begin(), levels.end());
  for (int l = 1; l <= top; ++l) pyramid.push_back(imgsig::Downsample2x(pyramid.back()));

  FeatureSet set;
  set.maps.push_back({"pixels", img, 1.0});
  for (size_t k = 0; k < levels.size(); ++k) {
    const double s = spec_.scales[k];
    const imgsig::Tensor& x = pyramid[levels[k]];
    const std::string tag = "s" + ScaleLabel(s);
    if (spec_.kind == BackendKind::kFilterbank) {
      const imgsig::WeightBank band = BandWeights(3);
      for (int stride : {1, 2}) {
        const std::string sub = tag + "/x" + std::to_string(stride);
        if (!(levels[k] == 0 && stride == 1)) {
          set.maps.push_back({sub + "/identity", stride == 1 ? x : Subsample2(x), s / stride});
        }
        set.maps.push_back({sub + "/band", imgsig::Conv2d(x, band, {stride, 3, imgsig::Padding::kReflect}),
                            s / stride});
      }
    } else {
      imgsig::Tensor a = x;
      int cum = 1;
      for (const ConvLayer& layer : layers_) {
        a = Relu(imgsig::Conv2d(a, layer.bank, {layer.stride, 1, imgsig::Padding::kZero}));
        cum *= layer.stride;
        if (layer.emit) set.maps.push_back({tag + "/" + layer.name, a, s / cum});
      }
    }
  }
  return set;
}

}  // namespace wdc::features
