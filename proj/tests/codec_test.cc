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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <numeric>
#include <string>
#include <vector>

#include "gtest/gtest.h"
#include "support/images.h"
#include "wdc/autodiff/eval.h"
#include "wdc/codec/bitstream.h"
#include "wdc/codec/codec.h"
#include "wdc/codec/config.h"
#include "wdc/codec/entropy_model.h"
#include "wdc/codec/network_quant.h"
#include "wdc/codec/state.h"
#include "wdc/codec/synthesis.h"
#include "wdc/codec/training.h"
#include "wdc/coder/laplace.h"
#include "wdc/error.h"
#include "wdc/imgsig/ops.h"

namespace wdc::codec {
namespace {

using imgsig::Plane;
using imgsig::Tensor;

CodecConfig SmallConfig(int num_arrays = 5) {
  CodecConfig cfg;
  cfg.num_arrays = num_arrays;
  cfg.steps = 80;
  cfg.log_interval = 20;
  return cfg;
}

// Random network tensors of the given config (latents excluded).
ad::ParamSet RandomNets(const CodecConfig& cfg, uint64_t seed, double scale = 0.4) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> n(0.0, scale);
  const ad::Array mask = EntropyMask(cfg.entropy_hidden);
  ad::ParamSet p;
  for (const TensorSpec& t : NetworkTensors(cfg)) {
    ad::Array a(t.shape);
    for (double& v : a.data) v = n(rng);
    if (t.name == "ent.w1") {
      for (size_t i = 0; i < a.size(); ++i) a.data[i] *= mask.data[i];
    }
    p.Add(t.name, std::move(a));
  }
  return p;
}

ad::ParamSet ZeroNets(const CodecConfig& cfg) {
  ad::ParamSet p;
  for (const TensorSpec& t : NetworkTensors(cfg)) p.Add(t.name, ad::Array(t.shape));
  return p;
}

Plane RandomIntPlane(int h, int w, uint64_t seed, int range = 3) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> d(-range, range);
  Plane p(h, w);
  for (double& v : p.values()) v = d(rng);
  return p;
}

LatentStack RandomLatents(int h, int w, int n, uint64_t seed) {
  LatentStack s;
  for (const auto& [rows, cols] : LatentShapes(h, w, n)) {
    s.arrays.push_back(RandomIntPlane(rows, cols, seed++));
  }
  s.quantized = true;
  return s;
}

// ---------------------------------------------------------------- config

TEST(CodecConfigTest, DefaultsValidateAndTextRoundTrips) {
  CodecConfig cfg;
  EXPECT_NO_THROW(cfg.Validate());
  cfg.lambda = 37.5;
  cfg.distortion = Distortion::kWd;
  cfg.synthesis = {{12, 3, true}, {3, 1, false}};
  cfg.sigma = "saliency:/tmp/x.png";
  const CodecConfig back = CodecConfig::FromText(cfg.ToText());
  EXPECT_EQ(back.ToText(), cfg.ToText());
  EXPECT_EQ(back.synthesis, cfg.synthesis);
  EXPECT_EQ(back.Digest(), cfg.Digest());
  EXPECT_NE(CodecConfig().Digest(), cfg.Digest());
}

TEST(CodecConfigTest, PartialTextKeepsDefaultsAndRejectsBadInput) {
  const CodecConfig c = CodecConfig::FromText("# comment\nlambda=12\n\nnum_arrays=4\n");
  EXPECT_EQ(c.lambda, 12.0);
  EXPECT_EQ(c.num_arrays, 4);
  EXPECT_EQ(c.cr_channels, CodecConfig().cr_channels);
  EXPECT_THROW(CodecConfig::FromText("no_such_key=1"), ConfigError);
  EXPECT_THROW(CodecConfig::FromText("lambda=-1"), ConfigError);
  EXPECT_THROW(CodecConfig::FromText("synthesis=8x1r"), ConfigError);  // last layer not RGB
  EXPECT_THROW(CodecConfig::FromText("synthesis=3x2"), ConfigError);   // even kernel
  CodecConfig s;
  EXPECT_THROW(s.Set("steps", "many"), ConfigError);
}

TEST(LatentShapesTest, DyadicPyramid) {
  const auto s = LatentShapes(512, 512, 7);
  ASSERT_EQ(s.size(), 7u);
  EXPECT_EQ(s.front(), std::make_pair(512, 512));
  EXPECT_EQ(s.back(), std::make_pair(8, 8));
  const auto odd = LatentShapes(33, 20, 3);
  EXPECT_EQ(odd[1], std::make_pair(17, 10));
  EXPECT_EQ(odd[2], std::make_pair(9, 5));
  EXPECT_EQ(LatentShapes(64, 64, 7).back(), std::make_pair(1, 1));
  EXPECT_THROW(LatentShapes(64, 64, 8), ConfigError);
  EXPECT_THROW(LatentShapes(7, 64, 1), ConfigError);
}

// ---------------------------------------------------------------- state

TEST(StateTest, InitIsDeterministicAndMasked) {
  const CodecConfig cfg = SmallConfig();
  const ad::ParamSet a = InitState(32, 32, cfg), b = InitState(32, 32, cfg);
  ASSERT_EQ(a.size(), b.size());
  for (size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.entry(i).value, b.entry(i).value);
  for (int n = 1; n <= cfg.num_arrays; ++n) {
    for (double v : a.Get(LatentName(n)).data) EXPECT_EQ(v, 0.0);
  }
  const ad::Array mask = EntropyMask(cfg.entropy_hidden);
  const ad::Array& w1 = a.Get("ent.w1");
  for (size_t i = 0; i < w1.size(); ++i) {
    if (mask.data[i] == 0.0) EXPECT_EQ(w1.data[i], 0.0);
  }
  CodecConfig other = cfg;
  other.seed = 2;
  EXPECT_NE(InitState(32, 32, other).Get("syn.w1"), a.Get("syn.w1"));
  EXPECT_THROW(InitState(16, 16, SmallConfig(6)), ConfigError);
}

TEST(StateTest, MaskHasSevenCausalTapsAndEmbeddingCentre) {
  const ad::Array m = EntropyMask(2);
  const int taps = kContextRows * kContextCols;
  for (int k = 0; k < 2; ++k) {
    double z = 0, e = 0;
    for (int t = 0; t < taps; ++t) {
      z += m.data[(k * 2 + 0) * taps + t];
      e += m.data[(k * 2 + 1) * taps + t];
      // Nothing at or after the centre in raster order on the latent channel.
      if (t >= taps / 2) EXPECT_EQ(m.data[(k * 2 + 0) * taps + t], 0.0) << t;
    }
    EXPECT_EQ(z, kContextTaps);
    EXPECT_EQ(e, 1.0);
    EXPECT_EQ(m.data[(k * 2 + 1) * taps + taps / 2], 1.0);
  }
}

TEST(StateTest, QuantizeRoundsHalfAwayFromZero) {
  LatentStack s;
  s.arrays.push_back(Plane(1, 4, {-1.5, -0.49, 0.5, 2.5}));
  const LatentStack q = QuantizeLatents(s);
  EXPECT_TRUE(q.quantized);
  EXPECT_EQ(q.arrays[0].at(0, 0), -2.0);
  EXPECT_EQ(q.arrays[0].at(0, 1), 0.0);
  EXPECT_EQ(q.arrays[0].at(0, 2), 1.0);
  EXPECT_EQ(q.arrays[0].at(0, 3), 3.0);
}

// ---------------------------------------------------------------- upsampling

TEST(UpsampleConcatTest, ZeroLatentsGiveZeroLatentChannelsAndFixedNoise) {
  const CodecConfig cfg = SmallConfig(4);
  LatentStack z;
  for (const auto& [h, w] : LatentShapes(32, 24, 4)) z.arrays.emplace_back(h, w);
  const Tensor t = UpsampleConcat(z, 42, cfg, 32, 24);
  ASSERT_EQ(t.channels(), 8);
  for (int c = 0; c < 4; ++c) {
    for (double v : t.channel(c)) EXPECT_EQ(v, 0.0);
  }
  for (int c = 4; c < 8; ++c) {
    double energy = 0;
    for (double v : t.channel(c)) energy += v * v;
    EXPECT_GT(energy, 0.0) << c;
  }
  EXPECT_EQ(UpsampleConcat(z, 42, cfg, 32, 24).values()[200], t.values()[200]);
  const Tensor other = UpsampleConcat(z, 43, cfg, 32, 24);
  EXPECT_NE(other.channel(7)[5], t.channel(7)[5]);
}

TEST(UpsampleConcatTest, ZeroNoiseChannelsGiveOneChannelPerArray) {
  CodecConfig cfg = SmallConfig(4);
  cfg.cr_channels = 0;
  const LatentStack z = RandomLatents(16, 16, 4, 3);
  const Tensor t = UpsampleConcat(z, 42, cfg, 16, 16);
  ASSERT_EQ(t.channels(), 4);
  // Coarse to fine; the finest array is already at full size.
  for (int y = 0; y < 16; ++y) {
    for (int x = 0; x < 16; ++x) EXPECT_EQ(t.at(3, y, x), z.arrays[0].at(y, x));
  }
  const Plane coarse = imgsig::BilinearResize(z.arrays[3], 16, 16);
  for (size_t i = 0; i < coarse.size(); ++i) EXPECT_EQ(t.channel(0)[i], coarse.values()[i]);
}

TEST(UpsampleConcatTest, NoiseChannelsAreResizedGaussianDraws) {
  CodecConfig cfg = SmallConfig(5);
  cfg.cr_channels = 2;
  LatentStack z;
  for (const auto& [h, w] : LatentShapes(16, 16, 5)) z.arrays.emplace_back(h, w);
  const Tensor t = UpsampleConcat(z, 42, cfg, 16, 16);
  ASSERT_EQ(t.channels(), 15);
  // Channels 5..6 are array 5 (1x1): constant planes holding the draw.
  const Tensor draw = CrArray(42, 5, 1, 1, 2);
  for (double v : t.channel(6)) EXPECT_EQ(v, draw.at(1, 0, 0));
  // Finest array noise is not resampled.
  const Tensor fine = CrArray(42, 1, 16, 16, 2);
  for (size_t i = 0; i < fine.plane_size(); ++i) EXPECT_EQ(t.channel(14)[i], fine.channel(1)[i]);
}

TEST(UpsampleConcatTest, GoldenSeed42) {
  const CodecConfig cfg = SmallConfig(5);
  const LatentStack z = RandomLatents(16, 16, 5, 11);
  const Tensor t = UpsampleConcat(z, 42, cfg, 16, 16);
  double sum = 0, sq = 0;
  for (double v : t.values()) {
    sum += v;
    sq += v * v;
  }
  // Recorded from the first verified run.
  EXPECT_NEAR(sum, 220.80189762000344, 1e-9);
  EXPECT_NEAR(sq, 4367.556198880342, 1e-9);
  EXPECT_NEAR(t.at(5, 0, 0), 0.082560067224293807, 1e-12);
  EXPECT_NEAR(t.at(7, 9, 4), 0.51894599145894882, 1e-12);
  EXPECT_NEAR(t.at(9, 15, 15), 0.78515431933768731, 1e-12);
}

// ---------------------------------------------------------------- synthesis

// Direct convolution with mirror padding, one output value at a time.
Tensor NaiveConvReflect(const Tensor& x, const ad::Array& w, const ad::Array& b, bool relu) {
  const int k_out = w.shape[0], k_in = w.shape[1], kh = w.shape[2], kw = w.shape[3];
  auto reflect = [](int i, int n) {
    if (i < 0) return -i;
    if (i >= n) return 2 * n - 2 - i;
    return i;
  };
  Tensor out(k_out, x.height(), x.width());
  for (int k = 0; k < k_out; ++k) {
    for (int y = 0; y < x.height(); ++y) {
      for (int xx = 0; xx < x.width(); ++xx) {
        double s = b.data[k];
        for (int c = 0; c < k_in; ++c) {
          for (int dy = 0; dy < kh; ++dy) {
            for (int dx = 0; dx < kw; ++dx) {
              const int iy = reflect(y + dy - kh / 2, x.height());
              const int ix = reflect(xx + dx - kw / 2, x.width());
              s += w.data[((static_cast<size_t>(k) * k_in + c) * kh + dy) * kw + dx] *
                   x.at(c, iy, ix);
            }
          }
        }
        out.at(k, y, xx) = relu ? std::max(s, 0.0) : s;
      }
    }
  }
  return out;
}

TEST(SynthesisTest, ZeroWeightsAndHalfBiasGiveGrey) {
  const CodecConfig cfg = SmallConfig(4);
  ad::ParamSet nets = ZeroNets(cfg);
  nets.GetMutable("syn.b3") = ad::Array({3}, 0.5);
  const LatentStack z = RandomLatents(16, 16, 4, 5);
  const Tensor img = Reconstruct(z, nets, cfg, 16, 16);
  for (double v : img.values()) EXPECT_EQ(v, 0.5);
}

TEST(SynthesisTest, IdentityNetPassesFirstChannels) {
  CodecConfig cfg = SmallConfig(4);
  cfg.synthesis = {{3, 1, false}};
  ad::ParamSet nets = ZeroNets(cfg);
  ad::Array& w = nets.GetMutable("syn.w1");
  for (int k = 0; k < 3; ++k) w.data[k * 8 + k] = 1.0;
  const LatentStack z = RandomLatents(16, 16, 4, 6);
  const Tensor f = UpsampleConcat(z, 42, cfg, 16, 16);
  const Tensor out = Synthesize(f, nets, cfg);
  for (int c = 0; c < 3; ++c) {
    for (size_t i = 0; i < f.plane_size(); ++i) EXPECT_EQ(out.channel(c)[i], f.channel(c)[i]);
  }
}

TEST(SynthesisTest, MatchesLayerByLayerOracleAndGraph) {
  CodecConfig cfg = SmallConfig(4);
  cfg.synthesis = {{6, 3, true}, {5, 1, true}, {3, 3, false}};
  const ad::ParamSet nets = RandomNets(cfg, 7);
  const LatentStack z = RandomLatents(12, 10, 4, 8);
  const Tensor f = UpsampleConcat(z, 42, cfg, 12, 10);
  Tensor ref = f;
  for (size_t k = 0; k < cfg.synthesis.size(); ++k) {
    const std::string id = std::to_string(k + 1);
    ref = NaiveConvReflect(ref, nets.Get("syn.w" + id), nets.Get("syn.b" + id),
                           cfg.synthesis[k].relu);
  }
  const Tensor out = Synthesize(f, nets, cfg);
  ASSERT_TRUE(out.SameShape(ref));
  for (size_t i = 0; i < out.size(); ++i) EXPECT_NEAR(out.values()[i], ref.values()[i], 1e-12);

  ad::Graph g;
  const ad::NodeId x = g.Constant(ad::Array::FromTensor(f));
  const ad::NodeId y = BuildSynthesisGraph(g, x, cfg, AddParamNodes(g, nets));
  const ad::Array gy = ad::ForwardEval(g, nets, {})[y];
  for (size_t i = 0; i < out.size(); ++i) EXPECT_EQ(gy.data[i], out.values()[i]);

  const Tensor clamped = ClampToUnit(out);
  for (size_t i = 0; i < out.size(); ++i) {
    EXPECT_EQ(clamped.values()[i], std::clamp(out.values()[i], 0.0, 1.0));
  }
}

TEST(SynthesisTest, ChannelMismatchThrows) {
  const CodecConfig cfg = SmallConfig(4);
  const ad::ParamSet nets = RandomNets(cfg, 1);
  EXPECT_THROW(Synthesize(Tensor(5, 8, 8), nets, cfg), ShapeError);
}

// ---------------------------------------------------------------- entropy model

// Full 5x3 two-channel convolution at (i, j) with zero padding, using every
// weight of ent.w1 (masked entries are zero), then the two pointwise layers.
LaplaceParams OracleParams(const ad::ParamSet& nets, const Plane& z, int n, int i, int j) {
  const ad::Array& w1 = nets.Get("ent.w1");
  const int hidden = w1.shape[0];
  const double e = nets.Get("ent.embed").data[n - 1];
  std::vector<double> h1(hidden), h2(hidden);
  for (int k = 0; k < hidden; ++k) {
    double s = nets.Get("ent.b1").data[k];
    for (int c = 0; c < 2; ++c) {
      for (int dy = 0; dy < kContextRows; ++dy) {
        for (int dx = 0; dx < kContextCols; ++dx) {
          const int y = i + dy - kContextRows / 2, x = j + dx - kContextCols / 2;
          if (y < 0 || x < 0 || y >= z.height() || x >= z.width()) continue;
          const double in = c == 0 ? z.at(y, x) : e;
          s += w1.data[((k * 2 + c) * kContextRows + dy) * kContextCols + dx] * in;
        }
      }
    }
    h1[k] = std::max(s, 0.0);
  }
  for (int k = 0; k < hidden; ++k) {
    double s = nets.Get("ent.b2").data[k];
    for (int c = 0; c < hidden; ++c) s += nets.Get("ent.w2").data[k * hidden + c] * h1[c];
    h2[k] = std::max(s, 0.0);
  }
  double out[2];
  for (int k = 0; k < 2; ++k) {
    double s = nets.Get("ent.b3").data[k];
    for (int c = 0; c < hidden; ++c) s += nets.Get("ent.w3").data[k * hidden + c] * h2[c];
    out[k] = s;
  }
  return {out[0], std::exp(std::max(out[1], -8.0))};
}

TEST(EntropyModelTest, ZeroNetGivesConstantParameters) {
  const CodecConfig cfg = SmallConfig(3);
  ad::ParamSet nets = ZeroNets(cfg);
  nets.GetMutable("ent.b3").data = {0.0, std::log(2.5)};
  const Plane z = RandomIntPlane(6, 7, 1);
  const EntropyPlanes p = EntropyParams(nets, z, 2);
  for (size_t i = 0; i < z.size(); ++i) {
    EXPECT_EQ(p.mu.values()[i], 0.0);
    EXPECT_NEAR(p.b.values()[i], 2.5, 1e-15);
  }
}

TEST(EntropyModelTest, MatchesGatherOracleOnRandomNet) {
  const CodecConfig cfg = SmallConfig(3);
  const ad::ParamSet nets = RandomNets(cfg, 21);
  for (int n = 1; n <= 3; ++n) {
    const Plane z = RandomIntPlane(4, 4, 30 + n);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        const LaplaceParams got = EntropyParamsAt(nets, z, n, i, j);
        const LaplaceParams want = OracleParams(nets, z, n, i, j);
        EXPECT_NEAR(got.mu, want.mu, 1e-12);
        EXPECT_NEAR(got.b, want.b, 1e-12 * want.b);
      }
    }
  }
}

TEST(EntropyModelTest, FirstElementSeesNoLatents) {
  const CodecConfig cfg = SmallConfig(3);
  const ad::ParamSet nets = RandomNets(cfg, 22);
  const LaplaceParams a = EntropyParamsAt(nets, RandomIntPlane(5, 5, 1), 1, 0, 0);
  const LaplaceParams b = EntropyParamsAt(nets, RandomIntPlane(5, 5, 2), 1, 0, 0);
  const LaplaceParams zero = EntropyParamsAt(nets, Plane(5, 5), 1, 0, 0);
  EXPECT_EQ(a.mu, zero.mu);
  EXPECT_EQ(b.b, zero.b);
  // The embedding makes arrays distinguishable.
  EXPECT_NE(EntropyParamsAt(nets, Plane(5, 5), 2, 0, 0).mu, zero.mu);
}

TEST(EntropyModelTest, PerturbationNeverReachesEarlierElements) {
  const CodecConfig cfg = SmallConfig(3);
  const ad::ParamSet nets = RandomNets(cfg, 23, 0.8);
  const Plane z = RandomIntPlane(6, 5, 3);
  const EntropyPlanes base = EntropyParams(nets, z, 1);
  for (int pi = 0; pi < z.height(); ++pi) {
    for (int pj = 0; pj < z.width(); ++pj) {
      Plane zp = z;
      zp.at(pi, pj) += 5;
      const EntropyPlanes p = EntropyParams(nets, zp, 1);
      const int cut = pi * z.width() + pj;
      bool later_changed = false;
      for (int k = 0; k < static_cast<int>(z.size()); ++k) {
        if (k <= cut) {
          ASSERT_EQ(p.mu.values()[k], base.mu.values()[k]) << pi << "," << pj << " -> " << k;
          ASSERT_EQ(p.b.values()[k], base.b.values()[k]);
        } else if (p.mu.values()[k] != base.mu.values()[k]) {
          later_changed = true;
        }
      }
      if (cut + 1 < static_cast<int>(z.size())) EXPECT_TRUE(later_changed) << pi << "," << pj;
    }
  }
}

TEST(EntropyModelTest, GraphAgreesWithScalarPath) {
  const CodecConfig cfg = SmallConfig(3);
  const ad::ParamSet nets = RandomNets(cfg, 24);
  const Plane z = RandomIntPlane(7, 9, 4);
  ad::Graph g;
  const ad::NodeId zn = g.Constant(ad::Array({1, 7, 9}, std::vector<double>(
                                                            z.values().begin(), z.values().end())));
  const ad::NodeId mask = g.Constant(EntropyMask(cfg.entropy_hidden));
  const EntropyNodes e = BuildEntropyGraph(g, zn, 3, mask, AddParamNodes(g, nets));
  const ad::Evaluation ev = ad::ForwardEval(g, nets, {});
  const EntropyPlanes p = EntropyParams(nets, z, 3);
  for (size_t i = 0; i < z.size(); ++i) {
    EXPECT_NEAR(ev[e.mu].data[i], p.mu.values()[i], 1e-12);
    EXPECT_NEAR(ev[e.b].data[i], p.b.values()[i], 1e-12 * p.b.values()[i]);
  }
}

TEST(EntropyModelTest, ScaleIsFloored) {
  const CodecConfig cfg = SmallConfig(3);
  ad::ParamSet nets = ZeroNets(cfg);
  nets.GetMutable("ent.b3").data = {0.0, -50.0};
  EXPECT_EQ(EntropyParamsAt(nets, Plane(2, 2), 1, 1, 1).b, std::exp(kMinLogScale));
}

// ---------------------------------------------------------------- rate

LatentStack ZeroLatents(int h, int w, int n) {
  LatentStack s;
  for (const auto& [rows, cols] : LatentShapes(h, w, n)) s.arrays.emplace_back(rows, cols);
  s.quantized = true;
  return s;
}

TEST(RateEstimateTest, UnitScaleZeroSymbolClosedForm) {
  const CodecConfig cfg = SmallConfig(3);
  const ad::ParamSet nets = ZeroNets(cfg);  // mu = 0, b = 1
  const LatentStack z = ZeroLatents(8, 8, 3);
  const RateBreakdown r = RateEstimate(z, nets);
  const double per = -std::log2(1.0 - std::exp(-0.5));
  EXPECT_NEAR(per, 1.3457, 1e-4);
  EXPECT_NEAR(r.total_bits, per * (64 + 16 + 4), 1e-9);
  EXPECT_NEAR(r.per_array_bits[1], per * 16, 1e-10);
}

TEST(RateEstimateTest, FlatterModelCostsMore) {
  const CodecConfig cfg = SmallConfig(3);
  ad::ParamSet nets = ZeroNets(cfg);
  const LatentStack z = ZeroLatents(8, 8, 3);
  double prev = 0;
  for (double b : {0.25, 0.5, 1.0, 2.0, 4.0, 16.0, 64.0}) {
    nets.GetMutable("ent.b3").data = {0.0, std::log(b)};
    const double bits = RateEstimate(z, nets).total_bits;
    EXPECT_GT(bits, prev) << b;
    prev = bits;
  }
}

TEST(RateEstimateTest, TotalIsSumOfArrays) {
  const CodecConfig cfg = SmallConfig(4);
  const ad::ParamSet nets = RandomNets(cfg, 25);
  const LatentStack z = RandomLatents(24, 20, 4, 40);
  for (const RateBreakdown& r : {RateEstimate(z, nets), CodedRateEstimate(z, nets)}) {
    ASSERT_EQ(r.per_array_bits.size(), 4u);
    double s = 0;
    for (double v : r.per_array_bits) s += v;
    EXPECT_EQ(s, r.total_bits);
  }
}

TEST(RateEstimateTest, TableCostTracksModelCost) {
  const CodecConfig cfg = SmallConfig(4);
  const ad::ParamSet nets = RandomNets(cfg, 26);
  const LatentStack z = RandomLatents(32, 32, 4, 50);
  const double model = RateEstimate(z, nets).total_bits;
  const double table = CodedRateEstimate(z, nets).total_bits;
  EXPECT_NEAR(table, model, 0.01 * model);
}

// ---------------------------------------------------------------- network quantisation

TEST(NetworkQuantTest, FirstEntropyLayerStoresOnlyCausalTaps) {
  const CodecConfig cfg;
  const std::vector<TensorSpec> specs = NetworkTensors(cfg);
  ASSERT_EQ(specs[0].name, "ent.w1");
  EXPECT_EQ(CodedIndices(specs[0], cfg).size(),
            static_cast<size_t>(cfg.entropy_hidden) * (kContextTaps + 1));
  EXPECT_EQ(CodedIndices(specs[1], cfg).size(), ad::ShapeSize(specs[1].shape));
}

TEST(NetworkQuantTest, DequantisedValuesLieOnGrid) {
  const CodecConfig cfg;
  const ad::ParamSet nets = RandomNets(cfg, 27);
  for (const TensorSpec& t : NetworkTensors(cfg)) {
    const QuantizedTensor q = QuantizeTensor(t, nets.Get(t.name), 6, cfg);
    const ad::Array d = DequantizeTensor(t, q, cfg);
    ASSERT_EQ(d.shape, t.shape);
    for (size_t i = 0; i < d.size(); ++i) {
      EXPECT_EQ(d.data[i] * 64, std::round(d.data[i] * 64));
      if (t.name != "ent.w1") EXPECT_LE(std::abs(d.data[i] - nets.Get(t.name).data[i]), 1.0 / 128);
    }
  }
}

TEST(NetworkQuantTest, ZeroTensorIsNearlyFree) {
  const CodecConfig cfg;
  const TensorSpec spec{"syn.w2", {24, 24, 1, 1}};
  const QuantizedTensor q = QuantizeTensor(spec, ad::Array(spec.shape), 8, cfg);
  EXPECT_LT(TensorBits(q), 0.01 * q.values.size());
}

TEST(NetworkQuantTest, FinerStepNeverCheaper) {
  const CodecConfig cfg;
  const TensorSpec spec{"syn.w1", {24, 14, 1, 1}};
  std::mt19937_64 rng(3);
  std::normal_distribution<double> n(0, 0.3);
  ad::Array v(spec.shape);
  for (double& x : v.data) x = n(rng);
  double prev = -1;
  for (int e = cfg.min_step_exponent; e <= cfg.max_step_exponent; ++e) {
    const double bits = TensorBits(QuantizeTensor(spec, v, e, cfg));
    EXPECT_GE(bits, prev) << e;
    prev = bits;
  }
}

TEST(NetworkQuantTest, PayloadRoundTrips) {
  const CodecConfig cfg;
  const ad::ParamSet nets = RandomNets(cfg, 28);
  std::vector<QuantizedTensor> qs;
  std::vector<int> exps;
  std::vector<float> scales;
  int e = cfg.min_step_exponent;
  for (const TensorSpec& t : NetworkTensors(cfg)) {
    qs.push_back(QuantizeTensor(t, nets.Get(t.name), e, cfg));
    exps.push_back(e);
    scales.push_back(qs.back().scale);
    e = e == cfg.max_step_exponent ? cfg.min_step_exponent : e + 1;
  }
  const std::vector<uint8_t> payload = EncodeNetworks(qs);
  const std::vector<QuantizedTensor> back = DecodeNetworks(payload, cfg, exps, scales);
  ASSERT_EQ(back.size(), qs.size());
  double bits = 0;
  for (size_t k = 0; k < qs.size(); ++k) {
    EXPECT_EQ(back[k].name, qs[k].name);
    EXPECT_EQ(back[k].values, qs[k].values);
    bits += TensorBits(qs[k]);
  }
  EXPECT_LE(8.0 * payload.size(), bits + 64);
  EXPECT_GE(8.0 * payload.size(), bits - 8);
}

TEST(NetworkQuantTest, GreedyChoiceIsDeterministicAndRespectsLoss) {
  CodecConfig cfg = SmallConfig(3);
  const ad::ParamSet nets = RandomNets(cfg, 29);
  // Loss only cares about syn.w1: it gets a fine step, everything else the
  // coarsest step.
  const ad::Array ref = nets.Get("syn.w1");
  auto loss = [&](const ad::ParamSet& p) {
    double s = 0;
    for (size_t i = 0; i < ref.size(); ++i) {
      const double d = p.Get("syn.w1").data[i] - ref.data[i];
      s += d * d;
    }
    return 1e6 * s;
  };
  const NetworkQuantResult a = QuantizeNetworks(nets, cfg, 64 * 64, loss);
  const NetworkQuantResult b = QuantizeNetworks(nets, cfg, 64 * 64, loss);
  ASSERT_EQ(a.tensors.size(), NetworkTensors(cfg).size());
  for (size_t k = 0; k < a.tensors.size(); ++k) {
    const QuantizedTensor& q = a.tensors[k];
    EXPECT_EQ(q.step_exponent, b.tensors[k].step_exponent);
    if (q.name == "syn.w1") {
      EXPECT_GT(q.step_exponent, 6);
    } else {
      EXPECT_EQ(q.step_exponent, cfg.min_step_exponent) << q.name;
    }
  }
  EXPECT_EQ(a.bits, b.bits);
}

// ---------------------------------------------------------------- MACs

TEST(DecoderMacsTest, DefaultConfigArithmetic) {
  const CodecConfig cfg;
  const MacBreakdown m = DecoderMacs(cfg, 64, 64);
  // 5461 latent elements on 64x64 with seven arrays; 16-wide entropy MLP
  // with 7 context taps plus the embedding.
  EXPECT_NEAR(m.entropy, (16.0 * 8 + 16 * 16 + 2 * 16) * 5461 / 4096, 1e-9);
  EXPECT_EQ(m.upsampling, 4.0 * 14);
  EXPECT_EQ(m.synthesis, 24.0 * 14 + 24 * 24 + 3 * 24 * 9);
  EXPECT_NEAR(m.total(), 2170.6328125, 1e-9);
  EXPECT_GE(m.total(), 1e3);
  EXPECT_LE(m.total(), 1e4);
  CodecConfig no_cr = cfg;
  no_cr.cr_channels = 0;
  const double share = 1.0 - DecoderMacs(no_cr, 64, 64).total() / m.total();
  EXPECT_GT(share, 0.0);
  EXPECT_LT(share, 0.15);
}

// ---------------------------------------------------------------- end to end

class CodecEndToEnd : public ::testing::Test {
 protected:
  struct Case {
    imgsig::PixelImage image;
    CodecConfig cfg;
    EncodeResult enc;
  };
  static void SetUpTestSuite() {
    cases_ = new std::vector<Case>();
    CodecConfig mse = SmallConfig(5);
    mse.lambda = 400;
    cases_->push_back({testing::TextureImage(32, 32, 1), mse, {}});
    CodecConfig wd = SmallConfig(4);
    wd.distortion = Distortion::kWd;
    wd.lambda = 5;
    wd.steps = 40;
    wd.wd_scales = 3;
    cases_->push_back({testing::ShapesImage(24, 40, 2), wd, {}});
    for (Case& c : *cases_) c.enc = Encode(c.image, c.cfg);
  }
  static void TearDownTestSuite() {
    delete cases_;
    cases_ = nullptr;
  }
  static std::vector<Case>* cases_;
};

std::vector<CodecEndToEnd::Case>* CodecEndToEnd::cases_ = nullptr;

TEST_F(CodecEndToEnd, DecodeReproducesEncoderReconstruction) {
  for (const Case& c : *cases_) {
    const DecodeResult d = Decode(c.enc.bytes);
    ASSERT_TRUE(d.image.SameShape(c.image));
    for (size_t i = 0; i < d.image.size(); ++i) {
      ASSERT_EQ(d.image.values()[i], c.enc.reconstruction.values()[i]) << i;
    }
    for (int n = 0; n < c.cfg.num_arrays; ++n) {
      for (size_t i = 0; i < d.latents.arrays[n].size(); ++i) {
        ASSERT_EQ(d.latents.arrays[n].values()[i], c.enc.latents.arrays[n].values()[i]);
      }
    }
    EXPECT_EQ(d.macs_per_pixel, DecoderMacs(c.cfg, c.image.height(), c.image.width()).total());
    EXPECT_EQ(d.architecture.synthesis, c.cfg.synthesis);
    // A second decode is identical.
    EXPECT_EQ(Decode(c.enc.bytes).image.values()[7], d.image.values()[7]);
  }
}

TEST_F(CodecEndToEnd, LatentPayloadTracksCrossEntropy) {
  for (const Case& c : *cases_) {
    const double estimate = RateEstimate(c.enc.latents, c.enc.nets).total_bits / 8;
    double payload = 0;
    for (size_t b : c.enc.array_bytes) payload += b;
    EXPECT_GE(payload, estimate);
    EXPECT_LE(payload, 1.02 * estimate + 64);
    double coded = c.enc.coded_estimate.total_bits / 8;
    EXPECT_LE(payload, coded + c.cfg.num_arrays * 3);
  }
}

TEST_F(CodecEndToEnd, BitAllocationSumsToFileSize) {
  for (const Case& c : *cases_) {
    const BitAllocation a = BitAllocationReport(c.enc.bytes);
    ASSERT_EQ(a.array_bpp.size(), static_cast<size_t>(c.cfg.num_arrays));
    EXPECT_NEAR(a.latent_bpp() + a.network_bpp + a.header_bpp, a.total_bpp, 1e-12);
    EXPECT_NEAR(a.total_bpp, c.enc.bpp(), 1e-12);
    EXPECT_NEAR(a.latent_bpp(), c.enc.latent_bpp(), 1e-12);
    const double pixels = static_cast<double>(c.image.height()) * c.image.width();
    EXPECT_NEAR(a.array_bpp[0], 8.0 * c.enc.array_bytes[0] / pixels, 1e-12);
    EXPECT_EQ(c.enc.header_bytes + c.enc.network_bytes +
                  std::accumulate(c.enc.array_bytes.begin(), c.enc.array_bytes.end(), size_t{0}),
              c.enc.bytes.size());
  }
}

TEST_F(CodecEndToEnd, EncodingIsDeterministic) {
  const Case& c = cases_->front();
  const EncodeResult again = Encode(c.image, c.cfg);
  EXPECT_EQ(again.bytes, c.enc.bytes);
  ASSERT_EQ(again.trace.size(), c.enc.trace.size());
  EXPECT_EQ(again.trace.back().loss, c.enc.trace.back().loss);
}

TEST_F(CodecEndToEnd, EveryFlippedByteIsDetected) {
  const std::vector<uint8_t>& bytes = cases_->front().enc.bytes;
  for (size_t i = 0; i < bytes.size(); ++i) {
    std::vector<uint8_t> bad = bytes;
    bad[i] ^= 0x10;
    EXPECT_THROW(Decode(bad), DecodeError) << "byte " << i;
  }
}

TEST_F(CodecEndToEnd, TruncationAndTrailingBytesAreRejected) {
  const std::vector<uint8_t>& bytes = cases_->front().enc.bytes;
  for (size_t n : {size_t{0}, size_t{3}, size_t{20}, bytes.size() / 2, bytes.size() - 1}) {
    EXPECT_THROW(Decode(std::span(bytes).first(n)), DecodeError) << n;
  }
  std::vector<uint8_t> longer = bytes;
  longer.push_back(0);
  EXPECT_THROW(Decode(longer), DecodeError);
}

TEST_F(CodecEndToEnd, ReportedOffsetPointsIntoCorruptPayload) {
  const Case& c = cases_->front();
  const size_t finest_start = c.enc.bytes.size() - c.enc.array_bytes[0];
  std::vector<uint8_t> bad = c.enc.bytes;
  bad[finest_start] ^= 1;
  try {
    Decode(bad);
    FAIL() << "no error";
  } catch (const DecodeError& e) {
    EXPECT_GE(e.byte_offset(), finest_start);
    EXPECT_LT(e.byte_offset(), c.enc.bytes.size());
  }
}

TEST_F(CodecEndToEnd, TraceCoversBothPhases) {
  for (const Case& c : *cases_) {
    ASSERT_FALSE(c.enc.trace.empty());
    EXPECT_FALSE(c.enc.trace.front().rounding);
    EXPECT_TRUE(c.enc.trace.back().rounding);
    for (const TraceEntry& t : c.enc.trace) EXPECT_TRUE(std::isfinite(t.loss));
  }
}

TEST(BitstreamTest, HeaderRoundTrips) {
  Bitstream b;
  Header& h = b.header;
  h.height = 300;
  h.width = 17;
  h.num_arrays = 2;
  h.cr_seed = 0x0123456789abcdefull;
  h.cr_channels = 1;
  h.entropy_hidden = 16;
  h.synthesis = {{8, 3, true}, {3, 1, false}};
  h.config_digest = 99;
  const size_t tensors = NetworkTensors(h.Architecture()).size();
  for (size_t k = 0; k < tensors; ++k) {
    h.step_exponents.push_back(static_cast<int>(k % 11) + 2);
    h.scales.push_back(0.25f * (k + 1));
  }
  b.network = {1, 2, 3};
  b.arrays = {{9}, {4, 5, 6, 7}};
  const std::vector<uint8_t> bytes = SerializeBitstream(b);
  EXPECT_EQ(bytes.size(), b.header_bytes + 3 + 1 + 4);
  const Bitstream p = ParseBitstream(bytes);
  EXPECT_EQ(p.header.height, 300);
  EXPECT_EQ(p.header.width, 17);
  EXPECT_EQ(p.header.cr_seed, h.cr_seed);
  EXPECT_EQ(p.header.synthesis, h.synthesis);
  EXPECT_EQ(p.header.step_exponents, h.step_exponents);
  EXPECT_EQ(p.header.scales, h.scales);
  EXPECT_EQ(p.arrays, b.arrays);
  EXPECT_EQ(p.network, b.network);
  EXPECT_EQ(p.header_bytes, b.header_bytes);
  EXPECT_EQ(std::string(bytes.begin(), bytes.begin() + 4), "WDC3");

  std::vector<uint8_t> bad = bytes;
  bad[0] = 'X';
  EXPECT_THROW(ParseBitstream(bad), DecodeError);
  bad = bytes;
  bad[4] = kVersion + 1;
  EXPECT_THROW(ParseBitstream(bad), DecodeError);
}

// ---------------------------------------------------------------- training behaviour

TEST(TrainingTest, ConstantImageNeedsAlmostNoLatentBits) {
  CodecConfig cfg = SmallConfig(3);
  cfg.lambda = 1e5;
  cfg.steps = 200;
  const imgsig::PixelImage img = testing::ConstantImage(32, 32, 0.2, 0.6, 0.9);
  const EncodeResult r = Encode(img, cfg);
  EXPECT_LT(r.distortion, 1e-4);
  EXPECT_LT(r.latent_bpp(), 0.05);
  const BitAllocation a = BitAllocationReport(r.bytes);
  EXPECT_GT(a.network_bpp + a.header_bpp, 0.9 * a.total_bpp);
}

TEST(TrainingTest, LambdaMovesRateAndDistortionInOpposition) {
  CodecConfig cfg = SmallConfig(4);
  cfg.steps = 120;
  const imgsig::PixelImage img = testing::TextureImage(32, 32, 5);
  const DistortionTarget target = MakeDistortionTarget(img, cfg);
  std::vector<TrainResult> runs;
  std::vector<double> rate, dist;
  for (double lambda : {20.0, 200.0, 2000.0}) {
    cfg.lambda = lambda;
    const TrainResult t = RdOptimize(target, cfg);
    const LatentStack z = QuantizeLatents(ExtractLatents(t.state, cfg.num_arrays));
    rate.push_back(RateEstimate(z, t.state).total_bits);
    dist.push_back(target.Evaluate(Reconstruct(z, t.state, cfg, 32, 32)));
  }
  for (int k = 0; k + 1 < 3; ++k) {
    EXPECT_GE(dist[k], dist[k + 1]) << k;  // 10x lambda: distortion does not increase
    EXPECT_LE(rate[k], rate[k + 1]) << k;  // lambda / 10: rate does not increase
  }
}

TEST(TrainingTest, DivergenceNamesTheStep) {
  CodecConfig cfg = SmallConfig(3);
  cfg.learning_rate = 1e300;
  cfg.steps = 20;
  const DistortionTarget target = MakeDistortionTarget(testing::TextureImage(16, 16, 1), cfg);
  try {
    RdOptimize(target, cfg);
    FAIL() << "no error";
  } catch (const ValueError& e) {
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos) << e.what();
  }
}

TEST(EncodeAtRateTest, BracketsLambdaToHitLatentRate) {
  CodecConfig cfg = SmallConfig(4);
  cfg.steps = 150;
  cfg.latent_lr_scale = 4;  // lets latents leave zero within a short run
  cfg.lambda = 20;
  const DistortionTarget target = MakeDistortionTarget(testing::TextureImage(32, 32, 9), cfg);
  const TargetedEncode t = EncodeAtRate(target, cfg, 0.6, RateMeasure::kLatent, 0.1, 8);
  EXPECT_GT(t.encodes, 1);
  EXPECT_LE(t.encodes, 8);
  EXPECT_TRUE(t.hit) << "closest " << t.result.latent_bpp() << " at lambda " << t.lambda;
  EXPECT_NEAR(t.result.latent_bpp(), 0.6, 0.06);
  EXPECT_GT(t.lambda, 20.0);
}

}  // namespace
}  // namespace wdc::codec
