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

#include "wdc/wdmetric/wd_graph.h"

#include "wdc/error.h"
#include "wdc/features/feature_graph.h"
#include "wdc/wdmetric/moments.h"

namespace wdc::wd {
namespace {

ad::Array Stack(const std::vector<imgsig::Plane>& planes) {
  const int h = planes[0].height(), w = planes[0].width();
  std::vector<double> data;
  data.reserve(planes.size() * static_cast<size_t>(h) * w);
  for (const auto& p : planes) data.insert(data.end(), p.values().begin(), p.values().end());
  return ad::Array({static_cast<int>(planes.size()), h, w}, std::move(data));
}

}  // namespace

WdTarget PrepareWdTarget(const imgsig::PixelImage& reference, const SigmaMap& sigma,
                         const features::FeatureExtractor& fx, int top) {
  ValidateSigma(sigma);
  if (sigma.height() != reference.height() || sigma.width() != reference.width()) {
    throw ShapeError("sigma map and reference image differ in size");
  }
  WdTarget t;
  t.height = reference.height();
  t.width = reference.width();
  t.top = top;
  features::FeatureSet fs = fx.Extract(reference);
  for (const auto& m : fs.maps) {
    WdMapTarget mt;
    mt.id = m.id;
    mt.deepest = -1;
    std::vector<MomentPyramid> pyr;
    for (int c = 0; c < m.tensor.channels(); ++c) pyr.push_back(BuildMomentPyramid(m.tensor.plane(c), top));
    for (int a = 0; a <= top; ++a) {
      const imgsig::Plane& grid = pyr[0].mu[a];
      imgsig::Plane w = WeightMap(AdaptSigma(sigma, m.r, grid.height(), grid.width()), a, top);
      bool any = false;
      for (double v : w.values()) any = any || v != 0.0;
      if (!any) continue;
      mt.deepest = a;
      std::vector<imgsig::Plane> mu, nu, ws;
      for (const auto& p : pyr) {
        mu.push_back(p.mu[a]);
        nu.push_back(p.nu[a]);
        ws.push_back(w);
      }
      mt.levels.push_back({a, Stack(mu), Stack(nu), Stack(ws)});
    }
    t.maps.push_back(std::move(mt));
  }
  return t;
}

ad::NodeId BuildWdLoss(ad::Graph& g, ad::NodeId image, const WdTarget& target,
                       const features::FeatureExtractor& fx, double nu_eps) {
  const ad::Shape& s = g.shape(image);
  if (s != ad::Shape{3, target.height, target.width}) {
    throw ShapeError("WD loss image node " + ad::ShapeString(s) + " does not match the target");
  }
  std::vector<features::GraphFeature> feats = features::BuildFeatureGraph(fx, g, image);
  if (feats.size() != target.maps.size()) throw ShapeError("WD target built with another backend");
  ad::NodeId total = -1;
  for (size_t m = 0; m < feats.size(); ++m) {
    const WdMapTarget& mt = target.maps[m];
    if (mt.levels.empty()) continue;
    ad::NodeId mu = feats[m].node;
    ad::NodeId rho = g.Square(mu);
    int level = 0;
    for (const WdLevelTarget& lt : mt.levels) {
      while (level < lt.alpha) {
        mu = features::Downsample2xNode(g, mu);
        rho = features::Downsample2xNode(g, rho);
        ++level;
      }
      if (g.shape(mu) != lt.mu.shape) throw ShapeError("WD target level shape mismatch");
      ad::NodeId dm = g.Sub(mu, g.Constant(lt.mu));
      ad::NodeId d2 = g.Square(dm);
      if (lt.alpha > 0) {
        ad::NodeId nu = g.SqrtClamped(g.Sub(rho, g.Square(mu)), nu_eps);
        d2 = g.Add(d2, g.Square(g.Sub(nu, g.Constant(lt.nu))));
      } else {
        // nu is identically zero at level 0 on both sides.
        bool zero = true;
        for (double v : lt.nu.data) zero = zero && v == 0.0;
        if (!zero) throw ValueError("level-0 reference deviation must be zero");
      }
      ad::NodeId d = g.SqrtClamped(d2);
      const double inv = 1.0 / static_cast<double>(lt.mu.shape[1] * lt.mu.shape[2]);
      ad::NodeId term = g.Mul(g.Sum(g.Mul(d, g.Constant(lt.weight))), g.Scalar(inv));
      total = total < 0 ? term : g.Add(total, term);
    }
  }
  if (total < 0) total = g.Scalar(0.0);
  return total;
}

}  // namespace wdc::wd
