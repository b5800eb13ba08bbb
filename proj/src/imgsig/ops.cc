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

#include "wdc/imgsig/ops.h"

#include <string>

#include "wdc/error.h"

namespace wdc::imgsig {

Tensor Downsample2x(const Tensor& t) {
  ConvGeometry g;
  g.in_channels = g.out_channels = g.groups = t.channels();
  g.height = t.height();
  g.width = t.width();
  g.kernel_h = g.kernel_w = 3;
  g.stride = 2;
  g.padding = Padding::kReflect;
  std::vector<double> weights;
  weights.reserve(9 * static_cast<size_t>(t.channels()));
  for (int c = 0; c < t.channels(); ++c) {
    weights.insert(weights.end(), kBinomial3x3.begin(), kBinomial3x3.end());
  }
  Tensor out(t.channels(), g.out_height(), g.out_width());
  omp::Conv2dForward(g, t.values(), weights, {}, out.values());
  return out;
}

Plane Downsample2x(const Plane& p) {
  Tensor t(1, p.height(), p.width(),
           std::vector<double>(p.values().begin(), p.values().end()));
  return Downsample2x(t).plane(0);
}

Tensor BilinearResize(const Tensor& t, int height, int width) {
  if (height < 1 || width < 1) {
    throw ShapeError("bilinear_resize: target dimensions must be positive");
  }
  Tensor out(t.channels(), height, width);
  omp::BilinearResize(t.channels(), t.height(), t.width(), t.values(), height,
                      width, out.values());
  return out;
}

Plane BilinearResize(const Plane& p, int height, int width) {
  Tensor t(1, p.height(), p.width(),
           std::vector<double>(p.values().begin(), p.values().end()));
  return BilinearResize(t, height, width).plane(0);
}

Tensor Conv2d(const Tensor& input, const WeightBank& bank,
              const ConvOptions& options) {
  ConvGeometry g;
  g.in_channels = input.channels();
  g.height = input.height();
  g.width = input.width();
  g.out_channels = bank.out_channels;
  g.kernel_h = bank.kernel_h;
  g.kernel_w = bank.kernel_w;
  g.stride = options.stride;
  g.groups = options.groups;
  g.padding = options.padding;
  ValidateGeometry(g);
  if (bank.in_per_group * options.groups != input.channels()) {
    throw ShapeError("conv2d: kernel expects " +
                     std::to_string(bank.in_per_group * options.groups) +
                     " input channels, got " +
                     std::to_string(input.channels()));
  }
  if (bank.weights.size() != g.weight_count()) {
    throw ShapeError("conv2d: weight count " +
                     std::to_string(bank.weights.size()) + " != expected " +
                     std::to_string(g.weight_count()));
  }
  if (!bank.bias.empty() &&
      bank.bias.size() != static_cast<size_t>(bank.out_channels)) {
    throw ShapeError("conv2d: bias length mismatch");
  }
  Tensor out(g.out_channels, g.out_height(), g.out_width());
  omp::Conv2dForward(g, input.values(), bank.weights, bank.bias, out.values());
  return out;
}

}  // namespace wdc::imgsig
