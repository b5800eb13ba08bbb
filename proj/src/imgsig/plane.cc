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

#include "wdc/imgsig/plane.h"

#include <cmath>
#include <string>
#include <utility>

#include "wdc/error.h"

namespace wdc::imgsig {
namespace {

void CheckDims(int height, int width) {
  if (height < 1 || width < 1) {
    throw ShapeError("plane dimensions must be positive, got " +
                     std::to_string(height) + "x" + std::to_string(width));
  }
}

}  // namespace

Plane::Plane(int height, int width, double fill)
    : height_(height), width_(width) {
  CheckDims(height, width);
  values_.assign(static_cast<size_t>(height) * width, fill);
}

Plane::Plane(int height, int width, std::vector<double> values)
    : height_(height), width_(width), values_(std::move(values)) {
  CheckDims(height, width);
  if (values_.size() != static_cast<size_t>(height) * width) {
    throw ShapeError("plane value count " + std::to_string(values_.size()) +
                     " does not match " + std::to_string(height) + "x" +
                     std::to_string(width));
  }
}

double Plane::Mean() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum / static_cast<double>(values_.size());
}

bool Plane::AllFinite() const {
  for (double v : values_) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

Tensor::Tensor(int channels, int height, int width, double fill)
    : channels_(channels), height_(height), width_(width) {
  CheckDims(height, width);
  if (channels < 1) throw ShapeError("tensor needs at least one channel");
  values_.assign(static_cast<size_t>(channels) * height * width, fill);
}

Tensor::Tensor(int channels, int height, int width, std::vector<double> values)
    : channels_(channels),
      height_(height),
      width_(width),
      values_(std::move(values)) {
  CheckDims(height, width);
  if (channels < 1) throw ShapeError("tensor needs at least one channel");
  if (values_.size() != static_cast<size_t>(channels) * height * width) {
    throw ShapeError("tensor value count mismatch");
  }
}

Tensor::Tensor(const std::vector<Plane>& planes) {
  if (planes.empty()) throw ShapeError("tensor needs at least one plane");
  channels_ = static_cast<int>(planes.size());
  height_ = planes[0].height();
  width_ = planes[0].width();
  values_.reserve(planes.size() * planes[0].size());
  for (const Plane& p : planes) {
    if (p.height() != height_ || p.width() != width_) {
      throw ShapeError("tensor planes must share dimensions");
    }
    values_.insert(values_.end(), p.values().begin(), p.values().end());
  }
}

Plane Tensor::plane(int c) const {
  auto ch = channel(c);
  return Plane(height_, width_, std::vector<double>(ch.begin(), ch.end()));
}

void Tensor::set_plane(int c, const Plane& p) {
  if (p.height() != height_ || p.width() != width_) {
    throw ShapeError("set_plane: dimension mismatch");
  }
  auto dst = channel(c);
  std::copy(p.values().begin(), p.values().end(), dst.begin());
}

void ValidatePixelImage(const PixelImage& img) {
  if (img.channels() != 3) {
    throw ShapeError("pixel image must have 3 channels, got " +
                     std::to_string(img.channels()));
  }
  for (double v : img.values()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValueError("pixel image values must lie in [0, 1]");
    }
  }
}

}  // namespace wdc::imgsig
