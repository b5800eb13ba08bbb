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

#include <cmath>
#include <random>

#include "gtest/gtest.h"
#include "support/gradcheck.h"
#include "support/wd_oracle.h"
#include "wdc/autodiff/eval.h"
#include "wdc/error.h"
#include "wdc/imgsig/ops.h"
#include "wdc/wdmetric/moments.h"
#include "wdc/wdmetric/sigma.h"
#include "wdc/wdmetric/wasserstein.h"
#include "wdc/wdmetric/wd_graph.h"

namespace wdc::wd {
namespace {

using imgsig::Plane;
using imgsig::Tensor;

Plane RandomPlane(int h, int w, uint64_t seed, double lo = 0, double hi = 1) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(lo, hi);
  Plane p(h, w);
  for (double& v : p.values()) v = u(rng);
  return p;
}

std::vector<double> Values(const Plane& p) { return {p.values().begin(), p.values().end()}; }

Tensor RandomImage(int h, int w, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0, 1);
  Tensor t(3, h, w);
  for (double& v : t.values()) v = u(rng);
  return t;
}

// Stationary texture: clamped white Gaussian noise around mid grey.
Tensor NoiseTexture(int h, int w, uint64_t seed) {
  Tensor n = imgsig::GaussianField(seed, h, w, 3);
  for (double& v : n.values()) v = std::clamp(0.5 + 0.15 * v, 0.0, 1.0);
  return n;
}

TEST(MomentPyramid, ConstantPlane) {
  MomentPyramid p = BuildMomentPyramid(Plane(9, 6, 0.7), 4);
  ASSERT_EQ(p.levels(), 5);
  for (int a = 0; a < 5; ++a) {
    for (double v : p.mu[a].values()) EXPECT_NEAR(v, 0.7, 1e-15);
    for (double v : p.nu[a].values()) EXPECT_LT(v, 1e-7);  // sqrt of rounding error
  }
}

TEST(MomentPyramid, LevelZeroIsFeatureItself) {
  Plane f = RandomPlane(5, 7, 1);
  MomentPyramid p = BuildMomentPyramid(f, 0);
  EXPECT_EQ(p.mu[0], f);
  for (double v : p.nu[0].values()) EXPECT_EQ(v, 0.0);
}

TEST(MomentPyramid, MatchesComposedKernelOracle) {
  for (uint64_t seed = 0; seed < 5; ++seed) {
    Plane f = RandomPlane(8, 8, seed, -1, 1);
    MomentPyramid p = BuildMomentPyramid(f, 3);
    for (int a = 1; a <= 3; ++a) {
      testing::OracleMoments o = testing::LocalMoments(f, a);
      auto mu = p.mu[a].values();
      auto nu = p.nu[a].values();
      ASSERT_EQ(mu.size(), o.mu.size());
      for (size_t i = 0; i < mu.size(); ++i) {
        EXPECT_NEAR(mu[i], o.mu[i], 1e-6);
        EXPECT_NEAR(nu[i], o.nu[i], 1e-6);
      }
    }
  }
}

TEST(MomentPyramid, NoNanFromRoundingNegativeVariance) {
  Plane f(16, 16, 0.1 + 1e-9);
  for (int i = 0; i < 16; ++i) f.at(i, i) = 0.1 + 3e-9;
  MomentPyramid p = BuildMomentPyramid(f, 5);
  for (const auto& nu : p.nu) {
    for (double v : nu.values()) EXPECT_TRUE(std::isfinite(v) && v >= 0);
  }
}

TEST(LocalWdMap, ZeroForIdenticalAndShiftForMean) {
  Plane f = RandomPlane(8, 8, 2);
  MomentPyramid a = BuildMomentPyramid(f, 2);
  Plane g = f;
  for (double& v : g.values()) v += 0.3;
  MomentPyramid b = BuildMomentPyramid(g, 2);
  for (int l = 0; l <= 2; ++l) {
    for (double v : Values(LocalWdMap(a, a, l))) EXPECT_EQ(v, 0.0);
    for (double v : Values(LocalWdMap(a, b, l))) EXPECT_NEAR(v, 0.3, 1e-6);
  }
  MomentPyramid c = BuildMomentPyramid(RandomPlane(8, 9, 3), 2);
  EXPECT_THROW(LocalWdMap(a, c, 1), ShapeError);
}

TEST(LocalWdMap, MatchesDirectFormula) {
  MomentPyramid a = BuildMomentPyramid(RandomPlane(7, 7, 4), 2);
  MomentPyramid b = BuildMomentPyramid(RandomPlane(7, 7, 5), 2);
  Plane d = LocalWdMap(a, b, 2);
  for (size_t i = 0; i < d.values().size(); ++i) {
    const double dm = a.mu[2].values()[i] - b.mu[2].values()[i];
    const double dn = a.nu[2].values()[i] - b.nu[2].values()[i];
    EXPECT_NEAR(d.values()[i], std::sqrt(dm * dm + dn * dn), 1e-15);
  }
}

TEST(AdaptSigma, ScalesAndClamps) {
  SigmaMap s = ConstantSigma(16, 16, 8);
  for (auto [h, w] : {std::pair{16, 16}, {8, 8}, {2, 1}}) {
    for (double v : Values(AdaptSigma(s, 1.0, h, w))) EXPECT_DOUBLE_EQ(v, 8.0);
    for (double v : Values(AdaptSigma(s, 0.5, h, w))) EXPECT_DOUBLE_EQ(v, 4.0);
  }
  for (double v : Values(AdaptSigma(ConstantSigma(4, 4, 0.25), 1.0, 4, 4))) EXPECT_EQ(v, 1.0);
}

TEST(WeightMap, Eq2Values) {
  for (int a = 0; a < 6; ++a) {
    EXPECT_EQ(ScaleWeight(std::exp2(a), a, 6), 1.0);
    EXPECT_EQ(ScaleWeight(std::exp2(a + 1), a, 6), 0.0);
    EXPECT_NEAR(ScaleWeight(std::exp2(a + 0.5), a, 6), 0.5, 1e-12);
  }
  EXPECT_EQ(ScaleWeight(1000.0, 6, 6), 1.0);
  EXPECT_EQ(ScaleWeight(1000.0, 5, 6), 0.0);
  Plane w = WeightMap(Plane(2, 2, 4.0), 2, 6);
  for (double v : w.values()) EXPECT_EQ(v, 1.0);
}

// Property: weights over alpha form a partition of unity for any sigma
// between 1 and 2^A (and beyond, through the top-level extrapolation).
TEST(WeightMap, PartitionOfUnity) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> l(0, 7.5);
  for (int t = 0; t < 2000; ++t) {
    const double s = std::exp2(l(rng));
    double sum = 0;
    for (int a = 0; a <= 6; ++a) sum += ScaleWeight(s, a, 6);
    ASSERT_NEAR(sum, 1.0, 1e-6) << s;
  }
}

TEST(Saliency, ConstantSaliencyGivesSigmaEight) {
  for (double c : {0.01, 0.3, 1.0}) {
    SigmaMap s = SigmaFromSaliency(Plane(6, 5, c));
    for (double v : s.values()) EXPECT_DOUBLE_EQ(v, 8.0);
  }
}

TEST(Saliency, PointValueAndMeanLikelihood) {
  Plane s(1, 2, std::vector<double>{1.0, 0.0});
  SigmaMap sig = SigmaFromSaliency(s);
  EXPECT_NEAR(sig.at(0, 0), 16.0 * 0.5 / 1.5, 1e-12);
  EXPECT_NEAR(sig.at(0, 0), 5.333333333333333, 1e-12);
  for (uint64_t seed = 0; seed < 50; ++seed) {
    Plane r = RandomPlane(9, 11, seed);
    const double p_min = 0.05 + 0.9 * (seed % 10) / 9.0;
    EXPECT_NEAR(SaliencyLikelihood(r, p_min).Mean(), 1.0, 1e-9);
  }
}

TEST(Saliency, InvalidInputs) {
  try {
    SigmaFromSaliency(Plane(3, 3, 0.0));
    FAIL();
  } catch (const ValueError& e) {
    EXPECT_NE(std::string(e.what()).find("degenerate saliency"), std::string::npos);
  }
  EXPECT_THROW(SigmaFromSaliency(Plane(3, 3, 1.5)), ValueError);
  EXPECT_THROW(SigmaFromSaliency(Plane(3, 3, 0.5), 0.0), ValueError);
  EXPECT_THROW(SigmaFromSaliency(Plane(3, 3, 0.5), 0.5, -1), ValueError);
  EXPECT_THROW(ConstantSigma(2, 2, -1), ValueError);
  for (double v : Values(ConstantSigma(2, 2, 0))) EXPECT_EQ(v, 0.0);
  for (double v : Values(ConstantSigma(2, 2, 8))) EXPECT_EQ(v, 8.0);
}

class WdTest : public ::testing::Test {
 protected:
  features::FeatureExtractor fx_;
};

TEST_F(WdTest, IdenticalImagesAndSymmetry) {
  Tensor a = RandomImage(24, 20, 1), b = RandomImage(24, 20, 2);
  SigmaMap s = SigmaFromSaliency(RandomPlane(24, 20, 3));
  EXPECT_EQ(WassersteinDistortion(a, a, s, fx_).total, 0.0);
  EXPECT_EQ(WassersteinDistortion(a, b, s, fx_).total, WassersteinDistortion(b, a, s, fx_).total);
}

TEST_F(WdTest, ZeroSigmaReducesToPointwiseDistance) {
  Tensor a = RandomImage(16, 16, 4), b = RandomImage(16, 16, 5);
  WDReport r = WassersteinDistortion(a, b, ConstantSigma(16, 16, 0), fx_);
  auto expect = testing::PointwiseDistances(fx_.Extract(a), fx_.Extract(b));
  ASSERT_EQ(r.per_feature.size(), expect.size());
  for (size_t i = 0; i < expect.size(); ++i) EXPECT_NEAR(r.per_feature[i], expect[i], 1e-9);
}

TEST_F(WdTest, MatchesBruteForceOracle) {
  for (double sigma : {1.0, 2.0, 4.0, 8.0, 3.0}) {
    Tensor a = RandomImage(32, 32, 10), b = RandomImage(32, 32, 11);
    WDReport r = WassersteinDistortion(a, b, ConstantSigma(32, 32, sigma), fx_);
    testing::OracleWd o = testing::BruteForceWd(fx_.Extract(a), fx_.Extract(b), sigma, kDefaultScales);
    EXPECT_NEAR(r.total, o.total, 1e-5 * o.total) << sigma;
  }
}

TEST_F(WdTest, TotalIsSumOfFeatures) {
  Tensor a = RandomImage(16, 16, 12), b = RandomImage(16, 16, 13);
  WDReport r = WassersteinDistortion(a, b, ConstantSigma(16, 16, 5), fx_);
  double s = 0, t = 0;
  for (double v : r.per_feature) s += v;
  for (double v : r.per_scale) t += v;
  EXPECT_NEAR(r.total, s, 1e-9);
  EXPECT_NEAR(r.total, t, 1e-9);
}

// Dyadic sigma selects one level per feature; half-octave sigma blends two.
TEST_F(WdTest, ScaleInterpolation) {
  Tensor a = RandomImage(32, 32, 14), b = RandomImage(32, 32, 15);
  features::FeatureSet fa = fx_.Extract(a), fb = fx_.Extract(b);
  auto single = [&](double log_sigma, double blend_at) {
    // Sum over features of the level-k mean distance, k from r_i * sigma.
    double total = 0;
    for (size_t m = 0; m < fa.maps.size(); ++m) {
      const double l = std::max(std::log2(fa.maps[m].r) + log_sigma, 0.0);
      for (int c = 0; c < fa.maps[m].tensor.channels(); ++c) {
        MomentPyramid pa = BuildMomentPyramid(fa.maps[m].tensor.plane(c), kDefaultScales);
        MomentPyramid pb = BuildMomentPyramid(fb.maps[m].tensor.plane(c), kDefaultScales);
        const int lo = static_cast<int>(std::floor(l));
        const double frac = l - lo;
        double v = (1 - frac) * LocalWdMap(pa, pb, lo).Mean();
        if (frac > 0) v += frac * LocalWdMap(pa, pb, lo + 1).Mean();
        total += v;
      }
    }
    (void)blend_at;
    return total;
  };
  for (int k = 0; k <= 4; ++k) {
    const double t = WassersteinDistortion(fa, fb, ConstantSigma(32, 32, std::exp2(k))).total;
    EXPECT_DOUBLE_EQ(t, single(k, 0));
    const double h = WassersteinDistortion(fa, fb, ConstantSigma(32, 32, std::exp2(k + 0.5))).total;
    EXPECT_NEAR(h, single(k + 0.5, 0), 1e-6);
  }
}

// Two draws of one noise texture are close at sigma 8 and far pointwise.
// The coarsest maps (r = 1/8) see sigma 8 as a single pixel, so they stay
// pointwise and hold the ratio near 0.3 rather than below 0.2.
TEST_F(WdTest, TextureResamplingRatio) {
  Tensor a = NoiseTexture(64, 64, 100), b = NoiseTexture(64, 64, 200);
  const double pooled = WassersteinDistortion(a, b, ConstantSigma(64, 64, 8), fx_).total;
  const double pointwise = WassersteinDistortion(a, b, ConstantSigma(64, 64, 0), fx_).total;
  const double ratio = pooled / pointwise;
  std::printf("texture WD ratio sigma8/sigma0 = %.12f\n", ratio);
  EXPECT_NEAR(ratio, 0.297621207085, 1e-9);
  const auto fa = fx_.Extract(a), fb = fx_.Extract(b);
  const double oracle = testing::BruteForceWd(fa, fb, 8.0, kDefaultScales).total /
                        testing::BruteForceWd(fa, fb, 0.0, kDefaultScales).total;
  EXPECT_NEAR(ratio, oracle, 1e-6);
  EXPECT_LT(ratio, 0.5);
}

TEST_F(WdTest, ShapeErrors) {
  Tensor a = RandomImage(8, 8, 1), b = RandomImage(8, 9, 2);
  EXPECT_THROW(WassersteinDistortion(a, b, ConstantSigma(8, 8, 1), fx_), ShapeError);
  EXPECT_THROW(WassersteinDistortion(a, a, ConstantSigma(8, 9, 1), fx_), ShapeError);
}

TEST_F(WdTest, ReportRoundTrip) {
  Tensor a = RandomImage(8, 8, 1), b = RandomImage(8, 8, 2);
  WDReport r = WassersteinDistortion(a, b, ConstantSigma(8, 8, 4), fx_, 6, "const:4");
  WDReport back = WDReport::Parse(r.Serialize());
  EXPECT_EQ(back.total, r.total);
  EXPECT_EQ(back.per_feature, r.per_feature);
  EXPECT_EQ(back.per_scale, r.per_scale);
  EXPECT_EQ(back.feature_ids, r.feature_ids);
  EXPECT_EQ(back.sigma_source, "const:4");
  EXPECT_EQ(back.backend, "filterbank@1,0.5,0.25");
  EXPECT_THROW(WDReport::Parse("total=abc\n"), FormatError);
  EXPECT_THROW(WDReport::Parse("bogus\n"), FormatError);
}

TEST(MsePsnr, Basics) {
  Tensor a(3, 4, 4, 0.0), b(3, 4, 4, 1.0);
  EXPECT_EQ(ComputeMsePsnr(a, a).mse, 0.0);
  EXPECT_TRUE(std::isinf(ComputeMsePsnr(a, a).psnr));
  EXPECT_EQ(ComputeMsePsnr(a, b).mse, 1.0);
  EXPECT_EQ(ComputeMsePsnr(a, b).psnr, 0.0);
  Tensor c = RandomImage(5, 6, 1), d = RandomImage(5, 6, 2);
  double s = 0;
  for (size_t i = 0; i < c.size(); ++i) s += (c.values()[i] - d.values()[i]) * (c.values()[i] - d.values()[i]);
  EXPECT_NEAR(ComputeMsePsnr(c, d).mse, s / 90.0, 1e-15);
  EXPECT_THROW(ComputeMsePsnr(c, a), ShapeError);
}

TEST_F(WdTest, GraphLossMatchesDirectAndDifferentiates) {
  Tensor ref = RandomImage(12, 12, 20), rec = RandomImage(12, 12, 21);
  SigmaMap sigma = SigmaFromSaliency(RandomPlane(12, 12, 22));
  WdTarget target = PrepareWdTarget(ref, sigma, fx_);
  ad::Graph g;
  ad::NodeId img = g.Param("img", {3, 12, 12});
  ad::NodeId loss = BuildWdLoss(g, img, target, fx_);
  ad::ParamSet p;
  p.Add("img", ad::Array::FromTensor(rec));
  const double direct = WassersteinDistortion(rec, ref, sigma, fx_).total;
  EXPECT_NEAR(ad::ForwardEval(g, p, {}).scalar(loss), direct, 1e-12 * direct);
  auto r = testing::CheckGradients(g, p, {}, loss, {}, 1e-6);
  EXPECT_LT(r.max_rel_error, 1e-4);
}

}  // namespace
}  // namespace wdc::wd
