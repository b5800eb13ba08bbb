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

#include "wdc/codec/entropy_model.h"

#include <algorithm>
#include <cmath>

#include "wdc/coder/range_coder.h"
#include "wdc/error.h"

namespace wdc::codec {

ad::Array EntropyMask(int hidden) {
  ad::Array m({hidden, 2, kContextRows, kContextCols});
  const int centre_y = kContextRows / 2;
  const int centre_x = kContextCols / 2;
  for (int k = 0; k < hidden; ++k) {
    double* w = &m.data[static_cast<size_t>(k) * 2 * kContextRows * kContextCols];
    for (const auto& [dy, dx] : kContextOffsets) {
      w[(centre_y + dy) * kContextCols + centre_x + dx] = 1.0;
    }
    w[kContextRows * kContextCols + centre_y * kContextCols + centre_x] = 1.0;
  }
  return m;
}

LaplaceParams EntropyParamsAt(const ad::ParamSet& nets, const imgsig::Plane& z, int n, int i,
                              int j) {
  const ad::Array& w1 = nets.Get("ent.w1");
  const ad::Array& b1 = nets.Get("ent.b1");
  const ad::Array& w2 = nets.Get("ent.w2");
  const ad::Array& b2 = nets.Get("ent.b2");
  const ad::Array& w3 = nets.Get("ent.w3");
  const ad::Array& b3 = nets.Get("ent.b3");
  const ad::Array& embed = nets.Get("ent.embed");
  const int hidden = b1.shape[0];
  const int cy = kContextRows / 2, cx = kContextCols / 2;
  const int taps = kContextRows * kContextCols;

  std::array<double, kContextTaps> ctx{};
  for (int t = 0; t < kContextTaps; ++t) {
    const int y = i + kContextOffsets[t][0];
    const int x = j + kContextOffsets[t][1];
    ctx[t] = (y >= 0 && x >= 0 && x < z.width()) ? z.at(y, x) : 0.0;
  }
  const double e = embed.data.at(n - 1);

  std::vector<double> h1(hidden), h2(hidden);
  for (int k = 0; k < hidden; ++k) {
    const double* w = &w1.data[static_cast<size_t>(k) * 2 * taps];
    double s = b1.data[k];
    for (int t = 0; t < kContextTaps; ++t) {
      s += w[(cy + kContextOffsets[t][0]) * kContextCols + cx + kContextOffsets[t][1]] * ctx[t];
    }
    s += w[taps + cy * kContextCols + cx] * e;
    h1[k] = std::max(s, 0.0);
  }
  for (int k = 0; k < hidden; ++k) {
    double s = b2.data[k];
    for (int c = 0; c < hidden; ++c) s += w2.data[static_cast<size_t>(k) * hidden + c] * h1[c];
    h2[k] = std::max(s, 0.0);
  }
  double out[2];
  for (int k = 0; k < 2; ++k) {
    double s = b3.data[k];
    for (int c = 0; c < hidden; ++c) s += w3.data[static_cast<size_t>(k) * hidden + c] * h2[c];
    out[k] = s;
  }
  return {out[0], std::exp(std::max(out[1], kMinLogScale))};
}

EntropyPlanes EntropyParams(const ad::ParamSet& nets, const imgsig::Plane& z, int n) {
  EntropyPlanes p{imgsig::Plane(z.height(), z.width()), imgsig::Plane(z.height(), z.width())};
  for (int i = 0; i < z.height(); ++i) {
    for (int j = 0; j < z.width(); ++j) {
      const LaplaceParams lp = EntropyParamsAt(nets, z, n, i, j);
      p.mu.at(i, j) = lp.mu;
      p.b.at(i, j) = lp.b;
    }
  }
  return p;
}

EntropyNodes BuildEntropyGraph(ad::Graph& g, ad::NodeId zhat, int n, ad::NodeId mask,
                               const std::map<std::string, ad::NodeId>& p) {
  const ad::Shape& s = g.shape(zhat);
  const ad::NodeId ones = g.Constant(ad::Array({1, s[1], s[2]}, 1.0));
  const ad::NodeId e = g.Mul(ones, g.SliceChannels(p.at("ent.embed"), n - 1, n));
  const ad::NodeId x = g.Concat({zhat, e});
  const ad::NodeId w1 = g.Mul(p.at("ent.w1"), mask);
  ad::NodeId h = g.Relu(g.Conv2d(x, w1, p.at("ent.b1"), 1, 1));
  h = g.Relu(g.Conv2d(h, p.at("ent.w2"), p.at("ent.b2"), 1, 1));
  const ad::NodeId out = g.Conv2d(h, p.at("ent.w3"), p.at("ent.b3"), 1, 1);
  const ad::NodeId mu = g.SliceChannels(out, 0, 1);
  const ad::NodeId b = g.Exp(g.Max(g.SliceChannels(out, 1, 2), g.Scalar(kMinLogScale)));
  return {mu, b};
}

coder::QuantizedCdf ElementTable(const LaplaceParams& p) {
  const auto [lo, hi] = coder::CodingRange(p.mu, p.b);
  return coder::LaplaceCdfTable(p.mu, p.b, lo, hi);
}

RateBreakdown RateEstimate(const LatentStack& latents, const ad::ParamSet& nets) {
  RateBreakdown r;
  for (int n = 1; n <= latents.size(); ++n) {
    const imgsig::Plane& z = latents.arrays[n - 1];
    const EntropyPlanes ep = EntropyParams(nets, z, n);
    double bits = 0;
    for (size_t k = 0; k < z.size(); ++k) {
      bits += coder::LaplaceBits(z.values()[k], ep.mu.values()[k], ep.b.values()[k]);
    }
    r.per_array_bits.push_back(bits);
    r.total_bits += bits;
  }
  return r;
}

RateBreakdown CodedRateEstimate(const LatentStack& latents, const ad::ParamSet& nets) {
  RateBreakdown r;
  for (int n = 1; n <= latents.size(); ++n) {
    const imgsig::Plane& z = latents.arrays[n - 1];
    double bits = 0;
    for (int i = 0; i < z.height(); ++i) {
      for (int j = 0; j < z.width(); ++j) {
        const coder::QuantizedCdf cdf = ElementTable(EntropyParamsAt(nets, z, n, i, j));
        bits += coder::EscapedBits(cdf, static_cast<int32_t>(z.at(i, j)));
      }
    }
    r.per_array_bits.push_back(bits);
    r.total_bits += bits;
  }
  return r;
}

}  // namespace wdc::codec
