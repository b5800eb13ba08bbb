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

#ifndef WDC_AUTODIFF_ARRAY_H_
#define WDC_AUTODIFF_ARRAY_H_

#include <string>
#include <vector>

#include "wdc/imgsig/plane.h"

namespace wdc::ad {

using Shape = std::vector<int>;

size_t ShapeSize(const Shape& shape);
std::string ShapeString(const Shape& shape);

// Dense row-major real array. Rank 0 is a scalar holding one value.
struct Array {
  Shape shape;
  std::vector<double> data;

  Array() : data(1, 0.0) {}
  explicit Array(Shape s, double fill = 0.0);
  Array(Shape s, std::vector<double> values);

  static Array Scalar(double v) { return Array(Shape{}, std::vector<double>{v}); }
  static Array FromTensor(const imgsig::Tensor& t);
  imgsig::Tensor ToTensor() const;

  size_t size() const { return data.size(); }
  int rank() const { return static_cast<int>(shape.size()); }
  int dim(int i) const { return shape[i]; }
  bool AllFinite() const;

  bool operator==(const Array&) const = default;
};

}  // namespace wdc::ad

#endif  // WDC_AUTODIFF_ARRAY_H_
