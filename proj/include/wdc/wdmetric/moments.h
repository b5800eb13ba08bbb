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

#ifndef WDC_WDMETRIC_MOMENTS_H_
#define WDC_WDMETRIC_MOMENTS_H_

#include <vector>

#include "wdc/imgsig/plane.h"

namespace wdc::wd {

// Local means and standard deviations of one feature plane at levels
// 0..A: mu_a = D^a f, nu_a = sqrt(max(D^a f^2 - mu_a^2, 0)), with D the 2x
// binomial downsampler. Level 0 is the plane itself with nu = 0.
struct MomentPyramid {
  std::vector<imgsig::Plane> mu;
  std::vector<imgsig::Plane> nu;
  int levels() const { return static_cast<int>(mu.size()); }
};

// Throws ValueError if top < 0.
MomentPyramid BuildMomentPyramid(const imgsig::Plane& f, int top);

// Elementwise 2-Wasserstein distance between the Gaussian approximations at
// level alpha: sqrt((mu_a - mu_b)^2 + (nu_a - nu_b)^2). Throws ShapeError on
// mismatched pyramids.
imgsig::Plane LocalWdMap(const MomentPyramid& a, const MomentPyramid& b, int alpha);

}  // namespace wdc::wd

#endif  // WDC_WDMETRIC_MOMENTS_H_
