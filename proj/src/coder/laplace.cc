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

#include "wdc/coder/laplace.h"

#include <algorithm>
#include <cmath>
#include <string>

#include "wdc/error.h"

namespace wdc::coder {
namespace {

// Mass of an interval [lo, hi] lying entirely on one side of the mode, in
// terms of distances from the mode: near <= far.
double OneSidedMass(double near, double far, double b) {
  // 0.5 * (exp(-near/b) - exp(-far/b)), written to avoid cancellation.
  return -0.5 * std::exp(-near / b) * std::expm1(-(far - near) / b);
}

}  // namespace

double LaplaceLowerTail(double x, double mu, double b) {
  const double t = x - mu;
  if (t < 0) return 0.5 * std::exp(t / b);
  return 1.0 - 0.5 * std::exp(-t / b);
}

double LaplaceUpperTail(double x, double mu, double b) {
  const double t = mu - x;
  if (t < 0) return 0.5 * std::exp(t / b);
  return 1.0 - 0.5 * std::exp(-t / b);
}

double LaplaceMass(double z, double mu, double b) {
  const double a = z - 0.5 - mu;
  const double c = z + 0.5 - mu;
  if (a >= 0) return OneSidedMass(a, c, b);
  if (c <= 0) return OneSidedMass(-c, -a, b);
  return 1.0 - 0.5 * std::exp(a / b) - 0.5 * std::exp(-c / b);
}

MassAndGrad LaplaceMassWithGrad(double z, double mu, double b) {
  const double a = z - 0.5 - mu;
  const double c = z + 0.5 - mu;
  const double fa = std::exp(-std::abs(a) / b) / (2 * b);
  const double fc = std::exp(-std::abs(c) / b) / (2 * b);
  MassAndGrad out;
  out.mass = LaplaceMass(z, mu, b);
  // dF(x)/dmu = -f(x), dF(x)/db = -(x - mu) f(x) / b.
  out.d_mu = fa - fc;
  out.d_b = (a * fa - c * fc) / b;
  return out;
}

double LaplaceBits(double z, double mu, double b) {
  return -std::log2(std::max(LaplaceMass(z, mu, b), kMassFloor));
}

std::pair<int32_t, int32_t> CodingRange(double mu, double b) {
  if (!(b > 0) || !std::isfinite(mu)) {
    throw ValueError("coding range needs finite mu and b > 0");
  }
  const double half = std::clamp(std::ceil(kRangeScales * b),
                                 static_cast<double>(kMinHalfWidth),
                                 static_cast<double>(kMaxHalfWidth));
  const double centre = std::clamp(std::round(mu), static_cast<double>(kSymbolMin),
                                   static_cast<double>(kSymbolMax));
  const auto lo = static_cast<int32_t>(std::max(centre - half, double{kSymbolMin}));
  const auto hi = static_cast<int32_t>(std::min(centre + half, double{kSymbolMax}));
  return {lo, hi};
}

QuantizedCdf::QuantizedCdf(int32_t z_min, std::vector<uint32_t> cumulative)
    : z_min_(z_min), cum_(std::move(cumulative)) {
  if (cum_.size() < 2 || cum_.front() != 0 || cum_.back() != kTotalFreq) {
    throw ValueError("cdf table must start at 0 and end at 2^16");
  }
  for (size_t i = 1; i < cum_.size(); ++i) {
    if (cum_[i] <= cum_[i - 1]) throw ValueError("cdf table not strictly increasing");
  }
}

double QuantizedCdf::Bits(int32_t z) const {
  return kPrecisionBits - std::log2(static_cast<double>(Freq(z)));
}

int32_t QuantizedCdf::Find(uint32_t target) const {
  auto it = std::upper_bound(cum_.begin(), cum_.end(), target);
  return z_min_ + static_cast<int32_t>(it - cum_.begin()) - 1;
}

QuantizedCdf LaplaceCdfTable(double mu, double b, int32_t z_min, int32_t z_max) {
  if (!(b > 0) || !std::isfinite(b)) throw ValueError("laplace scale must be > 0");
  if (!std::isfinite(mu)) throw ValueError("laplace location must be finite");
  if (z_min >= z_max) throw ValueError("cdf table needs z_min < z_max");
  const int64_t n = static_cast<int64_t>(z_max) - z_min + 1;
  if (n >= static_cast<int64_t>(kTotalFreq)) {
    throw ValueError("alphabet of " + std::to_string(n) + " symbols exceeds precision");
  }
  const double budget = static_cast<double>(kTotalFreq - n);
  std::vector<uint32_t> freq(n);
  int64_t used = 0;
  for (int64_t i = 0; i < n; ++i) {
    const double z = static_cast<double>(z_min + i);
    double p;
    if (i == 0) {
      p = LaplaceLowerTail(z + 0.5, mu, b);
    } else if (i == n - 1) {
      p = LaplaceUpperTail(z - 0.5, mu, b);
    } else {
      p = LaplaceMass(z, mu, b);
    }
    freq[i] = 1 + static_cast<uint32_t>(std::floor(p * budget));
    used += freq[i];
  }
  if (used > static_cast<int64_t>(kTotalFreq)) {
    throw Error("cdf integerization overflowed");
  }
  // Leftover from flooring goes to the symbol nearest the mode.
  const double mode = std::clamp(mu, static_cast<double>(z_min), static_cast<double>(z_max));
  int64_t best = 0;
  double best_dist = std::abs(static_cast<double>(z_min) - mode);
  for (int64_t i = 1; i < n; ++i) {
    const double d = std::abs(static_cast<double>(z_min + i) - mode);
    if (d < best_dist) {
      best = i;
      best_dist = d;
    } else if (d > best_dist) {
      break;
    }
  }
  freq[best] += static_cast<uint32_t>(static_cast<int64_t>(kTotalFreq) - used);
  std::vector<uint32_t> cum(n + 1, 0);
  for (int64_t i = 0; i < n; ++i) cum[i + 1] = cum[i] + freq[i];
  return QuantizedCdf(z_min, std::move(cum));
}

}  // namespace wdc::coder
