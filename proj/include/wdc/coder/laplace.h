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

#ifndef WDC_CODER_LAPLACE_H_
#define WDC_CODER_LAPLACE_H_

#include <cstdint>
#include <utility>
#include <vector>

namespace wdc::coder {

inline constexpr int kPrecisionBits = 16;
inline constexpr uint32_t kTotalFreq = 1u << kPrecisionBits;
// Probability floor shared by the coder tables and the training-time rate.
inline constexpr double kMassFloor = 1.0 / kTotalFreq;
inline constexpr int32_t kSymbolMin = -(1 << 15);
inline constexpr int32_t kSymbolMax = (1 << 15) - 1;
// Alphabet half-width in units of the Laplace scale, and the bounds applied
// to it so tables stay small and always leave room for the floor.
inline constexpr double kRangeScales = 64.0;
inline constexpr int32_t kMinHalfWidth = 2;
inline constexpr int32_t kMaxHalfWidth = 1 << 13;

// Probability mass of integer z under Laplace(mu, b), i.e.
// F(z + 1/2) - F(z - 1/2). Computed so that mass(mu + d) == mass(mu - d)
// bit-for-bit.
double LaplaceMass(double z, double mu, double b);

struct MassAndGrad {
  double mass;
  double d_mu;
  double d_b;
};
MassAndGrad LaplaceMassWithGrad(double z, double mu, double b);

// P(X <= x) and P(X >= x) for the continuous Laplace, mirror-symmetric.
double LaplaceLowerTail(double x, double mu, double b);
double LaplaceUpperTail(double x, double mu, double b);

// -log2(max(mass, kMassFloor)).
double LaplaceBits(double z, double mu, double b);

// Symbol range for a Laplace(mu, b) table: [mu - 64b, mu + 64b] with the
// half-width clamped to [kMinHalfWidth, kMaxHalfWidth], intersected with the
// 16-bit signed range.
std::pair<int32_t, int32_t> CodingRange(double mu, double b);

// Integer frequency table over [z_min, z_max] with total kTotalFreq.
class QuantizedCdf {
 public:
  QuantizedCdf(int32_t z_min, std::vector<uint32_t> cumulative);

  int32_t z_min() const { return z_min_; }
  int32_t z_max() const { return z_min_ + static_cast<int32_t>(cum_.size()) - 2; }
  int32_t size() const { return static_cast<int32_t>(cum_.size()) - 1; }
  bool Contains(int32_t z) const { return z >= z_min() && z <= z_max(); }

  uint32_t Cum(int32_t z) const { return cum_[z - z_min_]; }
  uint32_t Freq(int32_t z) const { return cum_[z - z_min_ + 1] - cum_[z - z_min_]; }
  double Bits(int32_t z) const;
  // Symbol whose interval contains target, 0 <= target < kTotalFreq.
  int32_t Find(uint32_t target) const;

  const std::vector<uint32_t>& cumulative() const { return cum_; }

 private:
  int32_t z_min_;
  std::vector<uint32_t> cum_;
};

// Builds the table. Each symbol receives 1 + floor(P(z) * (2^16 - n)) where
// n is the alphabet size and P(z) is the Laplace mass with the tails folded
// into z_min and z_max. The leftover count goes to the in-range symbol
// closest to mu (ties to the smaller symbol). Throws ValueError if b <= 0,
// z_min >= z_max, or the alphabet does not fit the precision.
QuantizedCdf LaplaceCdfTable(double mu, double b, int32_t z_min, int32_t z_max);

}  // namespace wdc::coder

#endif  // WDC_CODER_LAPLACE_H_
