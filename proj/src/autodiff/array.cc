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

#include "wdc/autodiff/array.h"

#include <cmath>

#include "wdc/error.h"

namespace wdc::ad {

size_t ShapeSize(const Shape& shape) {
  size_t n = 1;
  for (int d : shape) {
    if (d <= 0) throw ShapeError("array dimensions must be positive, got " + ShapeString(shape));
    n *= static_cast<size_t>(d);
  }
  return n;
}

std::string ShapeString(const Shape& shape) {
  std::string s = "[";
  for (size_t i = 0; i < shape.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(shape[i]);
  }
  return s + "]";
}

Array::Array(Shape s, double fill) : shape(std::move(s)), data(ShapeSize(shape), fill) {}

Array::Array(Shape s, std::vector<double> values)
    : shape(std::move(s)), data(std::move(values)) {
  if (data.size() != ShapeSize(shape)) {
    throw ShapeError("array of shape " + ShapeString(shape) + " given " +
                     std::to_string(data.size()) + " values");
  }
}

Array Array::FromTensor(const imgsig::Tensor& t) {
  return Array({t.channels(), t.height(), t.width()},
               std::vector<double>(t.values().begin(), t.values().end()));
}

imgsig::Tensor Array::ToTensor() const {
  if (rank() != 3) throw ShapeError("tensor conversion needs rank 3, got " + ShapeString(shape));
  return imgsig::Tensor(shape[0], shape[1], shape[2], data);
}

bool Array::AllFinite() const {
  for (double v : data) {
    if (!std::isfinite(v)) return false;
  }
  return true;
}

}  // namespace wdc::ad
