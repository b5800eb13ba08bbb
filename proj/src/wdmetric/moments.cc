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

#include "wdc/wdmetric/moments.h"

#include <algorithm>
#include <cmath>

#include "wdc/error.h"
#include "wdc/imgsig/ops.h"

namespace wdc::wd {

MomentPyramid BuildMomentPyramid(const imgsig::Plane& f, int top) {
  if (top < 0) throw ValueError("scale count must be >= 0");
  MomentPyramid p;
  p.mu.push_back(f);
  p.nu.emplace_back(f.height(), f.width(), 0.0);
  imgsig::Plane rho = f;
  for (double& v : rho.values()) v *= v;
  for (int a = 1; a <= top; ++a) {
    p.mu.push_back(imgsig::Downsample2x(p.mu.back()));
    rho = imgsig::Downsample2x(rho);
    imgsig::Plane nu(rho.height(), rho.width());
    auto m = p.mu.back().values();
    auto r = rho.values();
    auto n = nu.values();
    for (size_t i = 0; i < n.size(); ++i) n[i] = std::sqrt(std::max(r[i] - m[i] * m[i], 0.0));
    p.nu.push_back(std::move(nu));
  }
  return p;
}

imgsig::Plane LocalWdMap(const MomentPyramid& a, const MomentPyramid& b, int alpha) {
  if (alpha < 0 || alpha >= a.levels() || alpha >= b.levels()) {
    throw ShapeError("pyramid level " + std::to_string(alpha) + " out of range");
  }
  const imgsig::Plane& ma = a.mu[alpha];
  const imgsig::Plane& mb = b.mu[alpha];
  if (ma.height() != mb.height() || ma.width() != mb.width()) {
    throw ShapeError("moment pyramids have different shapes");
  }
  imgsig::Plane d(ma.height(), ma.width());
  auto o = d.values();
  auto am = ma.values(), bm = mb.values();
  auto an = a.nu[alpha].values(), bn = b.nu[alpha].values();
  for (size_t i = 0; i < o.size(); ++i) {
    const double dm = am[i] - bm[i];
    const double dn = an[i] - bn[i];
    o[i] = std::sqrt(dm * dm + dn * dn);
  }
  return d;
}

}  // namespace wdc::wd
