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

#ifndef WDC_IMGSIG_PLANE_H_
#define WDC_IMGSIG_PLANE_H_

#include <cstddef>
#include <span>
#include <vector>

namespace wdc::imgsig {

// A single-channel 2-D field of reals, row-major.
class Plane {
 public:
  Plane() = default;
  Plane(int height, int width, double fill = 0.0);
  Plane(int height, int width, std::vector<double> values);

  int height() const { return height_; }
  int width() const { return width_; }
  size_t size() const { return values_.size(); }

  double& at(int y, int x) { return values_[static_cast<size_t>(y) * width_ + x]; }
  double at(int y, int x) const {
    return values_[static_cast<size_t>(y) * width_ + x];
  }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  // Mean of all values, accumulated in order.
  double Mean() const;
  bool AllFinite() const;

  bool operator==(const Plane&) const = default;

 private:
  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

// A stack of equally-sized planes, stored contiguously channel-major (CHW).
class Tensor {
 public:
  Tensor() = default;
  Tensor(int channels, int height, int width, double fill = 0.0);
  Tensor(int channels, int height, int width, std::vector<double> values);
  explicit Tensor(const std::vector<Plane>& planes);

  int channels() const { return channels_; }
  int height() const { return height_; }
  int width() const { return width_; }
  size_t plane_size() const { return static_cast<size_t>(height_) * width_; }
  size_t size() const { return values_.size(); }

  double& at(int c, int y, int x) {
    return values_[c * plane_size() + static_cast<size_t>(y) * width_ + x];
  }
  double at(int c, int y, int x) const {
    return values_[c * plane_size() + static_cast<size_t>(y) * width_ + x];
  }

  std::span<double> channel(int c) {
    return std::span<double>(values_).subspan(c * plane_size(), plane_size());
  }
  std::span<const double> channel(int c) const {
    return std::span<const double>(values_).subspan(c * plane_size(),
                                                    plane_size());
  }
  Plane plane(int c) const;
  void set_plane(int c, const Plane& p);

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  bool SameShape(const Tensor& other) const {
    return channels_ == other.channels_ && height_ == other.height_ &&
           width_ == other.width_;
  }

  bool operator==(const Tensor&) const = default;

 private:
  int channels_ = 0;
  int height_ = 0;
  int width_ = 0;
  std::vector<double> values_;
};

// An RGB image with values in [0, 1]. Shares the Tensor representation;
// ValidatePixelImage checks the extra invariants.
using PixelImage = Tensor;

// Throws ShapeError / ValueError if `img` is not a 3-channel image with values
// in [0, 1].
void ValidatePixelImage(const PixelImage& img);

}  // namespace wdc::imgsig

#endif  // WDC_IMGSIG_PLANE_H_
