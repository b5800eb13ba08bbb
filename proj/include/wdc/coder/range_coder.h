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

#ifndef WDC_CODER_RANGE_CODER_H_
#define WDC_CODER_RANGE_CODER_H_

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "wdc/coder/laplace.h"

namespace wdc::coder {

// Carry-less 64-bit range coder with 16-bit frequency precision. Symbols at
// the extremes of a table double as escapes: a value beyond the table is
// coded as the extreme symbol followed by its overshoot as an order-0
// Exp-Golomb code in equiprobable bits.
class RangeEncoder {
 public:
  RangeEncoder() = default;

  // Codes z, which must lie inside the table. Throws ValueError otherwise.
  void Encode(const QuantizedCdf& cdf, int32_t z);
  // Codes any z in the 16-bit signed range using escapes.
  void EncodeWithEscape(const QuantizedCdf& cdf, int32_t z);
  void EncodeInterval(uint32_t cum, uint32_t freq);
  void EncodeBits(uint32_t value, int nbits);
  void EncodeExpGolomb(uint32_t value);

  // Flushes the shortest byte prefix that identifies the final interval and
  // returns the stream. The encoder is spent after.
  std::vector<uint8_t> Finish();

 private:
  void Narrow(uint32_t cum, uint32_t freq, int total_bits);

  uint64_t low_ = 0;
  uint64_t range_ = ~uint64_t{0};
  std::vector<uint8_t> out_;
  bool finished_ = false;
};

class RangeDecoder {
 public:
  // Up to eight implicit zero bytes follow the stream; reading further
  // throws DecodeError.
  explicit RangeDecoder(std::span<const uint8_t> bytes);

  int32_t Decode(const QuantizedCdf& cdf);
  int32_t DecodeWithEscape(const QuantizedCdf& cdf);
  uint32_t DecodeBits(int nbits);
  uint32_t DecodeExpGolomb();

  // Bytes consumed, counting implicit trailing zeros.
  size_t position() const { return pos_; }
  size_t size() const { return bytes_.size(); }

 private:
  uint32_t Target(int total_bits);
  void Narrow(uint32_t cum, uint32_t freq);
  uint8_t NextByte();

  std::span<const uint8_t> bytes_;
  size_t pos_ = 0;
  uint64_t low_ = 0;
  uint64_t range_ = ~uint64_t{0};
  uint64_t code_ = 0;
};

// Bits needed for value under the escape scheme of table: the table cost of
// the coded symbol plus Exp-Golomb bits for any overshoot.
double EscapedBits(const QuantizedCdf& cdf, int32_t z);
int ExpGolombLength(uint32_t value);

// Supplies the table for symbol i given the symbols coded so far, so the
// same provider drives adaptive encoding and decoding.
using CdfProvider =
    std::function<QuantizedCdf(size_t index, std::span<const int32_t> previous)>;

std::vector<uint8_t> RangeEncode(std::span<const int32_t> symbols,
                                 const CdfProvider& provider);
std::vector<int32_t> RangeDecode(std::span<const uint8_t> bytes,
                                 const CdfProvider& provider, size_t count);

}  // namespace wdc::coder

#endif  // WDC_CODER_RANGE_CODER_H_
