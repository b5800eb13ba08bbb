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

#include "wdc/coder/range_coder.h"

#include <bit>
#include <string>

#include "wdc/error.h"

namespace wdc::coder {
namespace {

constexpr uint64_t kTop = uint64_t{1} << 56;
constexpr uint64_t kBottom = uint64_t{1} << 48;
// The decoder primes this many bytes and treats up to this many bytes past
// the end of the stream as zeros, which lets Finish drop trailing zeros.
constexpr int kStateBytes = 8;

}  // namespace

void RangeEncoder::Narrow(uint32_t cum, uint32_t freq, int total_bits) {
  if (finished_) throw Error("range encoder used after Finish");
  range_ >>= total_bits;
  low_ += cum * range_;
  range_ *= freq;
  while (true) {
    if ((low_ ^ (low_ + range_)) >= kTop) {
      if (range_ >= kBottom) break;
      range_ = (0 - low_) & (kBottom - 1);
    }
    out_.push_back(static_cast<uint8_t>(low_ >> 56));
    low_ <<= 8;
    range_ <<= 8;
  }
}

void RangeEncoder::EncodeInterval(uint32_t cum, uint32_t freq) {
  if (freq == 0 || cum + freq > kTotalFreq) throw ValueError("bad coding interval");
  Narrow(cum, freq, kPrecisionBits);
}

void RangeEncoder::Encode(const QuantizedCdf& cdf, int32_t z) {
  if (!cdf.Contains(z)) {
    throw ValueError("symbol " + std::to_string(z) + " outside table range [" +
                     std::to_string(cdf.z_min()) + ", " + std::to_string(cdf.z_max()) + "]");
  }
  Narrow(cdf.Cum(z), cdf.Freq(z), kPrecisionBits);
}

void RangeEncoder::EncodeWithEscape(const QuantizedCdf& cdf, int32_t z) {
  if (z < kSymbolMin || z > kSymbolMax) {
    throw ValueError("symbol " + std::to_string(z) + " outside 16-bit range");
  }
  if (z <= cdf.z_min()) {
    Encode(cdf, cdf.z_min());
    EncodeExpGolomb(static_cast<uint32_t>(cdf.z_min() - z));
  } else if (z >= cdf.z_max()) {
    Encode(cdf, cdf.z_max());
    EncodeExpGolomb(static_cast<uint32_t>(z - cdf.z_max()));
  } else {
    Encode(cdf, z);
  }
}

void RangeEncoder::EncodeBits(uint32_t value, int nbits) {
  // One bit at a time keeps the range well above the renormalization floor.
  for (int i = nbits - 1; i >= 0; --i) Narrow((value >> i) & 1u, 1, 1);
}

int ExpGolombLength(uint32_t value) {
  const int k = std::bit_width(uint64_t{value} + 1) - 1;
  return 2 * k + 1;
}

void RangeEncoder::EncodeExpGolomb(uint32_t value) {
  const uint64_t v = uint64_t{value} + 1;
  const int k = std::bit_width(v) - 1;
  EncodeBits(0, k);
  EncodeBits(static_cast<uint32_t>(v), k + 1);
}

std::vector<uint8_t> RangeEncoder::Finish() {
  if (finished_) throw Error("range encoder finished twice");
  // Emit the shortest byte prefix of some value in [low, low + range); the
  // decoder pads the rest with zeros. range >= 2^48 here, so at most three
  // bytes are needed.
  for (int k = 0; k <= kStateBytes; ++k) {
    const int shift = 64 - 8 * k;
    uint64_t v = 0;
    if (shift < 64) {
      const uint64_t mask = (uint64_t{1} << shift) - 1;
      if ((low_ & mask) == 0) {
        v = low_;
      } else if ((low_ >> shift) == (~uint64_t{0} >> shift)) {
        continue;  // rounding up would wrap
      } else {
        v = ((low_ >> shift) + 1) << shift;
      }
    }
    if (v < low_ || v - low_ >= range_) continue;
    for (int i = 0; i < k; ++i) out_.push_back(static_cast<uint8_t>(v >> (56 - 8 * i)));
    break;
  }
  finished_ = true;
  return std::move(out_);
}

RangeDecoder::RangeDecoder(std::span<const uint8_t> bytes) : bytes_(bytes) {
  for (int i = 0; i < kStateBytes; ++i) code_ = (code_ << 8) | NextByte();
}

uint8_t RangeDecoder::NextByte() {
  if (pos_ < bytes_.size()) return bytes_[pos_++];
  if (pos_ >= bytes_.size() + kStateBytes) {
    throw DecodeError("range decoder ran out of bytes", bytes_.size());
  }
  ++pos_;
  return 0;
}

uint32_t RangeDecoder::Target(int total_bits) {
  range_ >>= total_bits;
  const uint64_t t = (code_ - low_) / range_;
  const uint64_t limit = (uint64_t{1} << total_bits) - 1;
  return static_cast<uint32_t>(t < limit ? t : limit);
}

void RangeDecoder::Narrow(uint32_t cum, uint32_t freq) {
  low_ += cum * range_;
  range_ *= freq;
  while (true) {
    if ((low_ ^ (low_ + range_)) >= kTop) {
      if (range_ >= kBottom) break;
      range_ = (0 - low_) & (kBottom - 1);
    }
    code_ = (code_ << 8) | NextByte();
    low_ <<= 8;
    range_ <<= 8;
  }
}

int32_t RangeDecoder::Decode(const QuantizedCdf& cdf) {
  const int32_t z = cdf.Find(Target(kPrecisionBits));
  Narrow(cdf.Cum(z), cdf.Freq(z));
  return z;
}

int32_t RangeDecoder::DecodeWithEscape(const QuantizedCdf& cdf) {
  const int32_t z = Decode(cdf);
  int64_t value = z;
  if (z == cdf.z_min()) value -= DecodeExpGolomb();
  if (z == cdf.z_max()) value += DecodeExpGolomb();
  if (value < kSymbolMin || value > kSymbolMax) {
    throw DecodeError("escaped symbol outside 16-bit range", pos_);
  }
  return static_cast<int32_t>(value);
}

uint32_t RangeDecoder::DecodeBits(int nbits) {
  uint32_t v = 0;
  for (int i = 0; i < nbits; ++i) {
    const uint32_t bit = Target(1);
    Narrow(bit, 1);
    v = (v << 1) | bit;
  }
  return v;
}

uint32_t RangeDecoder::DecodeExpGolomb() {
  int k = 0;
  while (DecodeBits(1) == 0) {
    if (++k > 31) throw DecodeError("malformed Exp-Golomb code", pos_);
  }
  const uint64_t v = (uint64_t{1} << k) | DecodeBits(k);
  return static_cast<uint32_t>(v - 1);
}

double EscapedBits(const QuantizedCdf& cdf, int32_t z) {
  if (z <= cdf.z_min()) {
    return cdf.Bits(cdf.z_min()) + ExpGolombLength(static_cast<uint32_t>(cdf.z_min() - z));
  }
  if (z >= cdf.z_max()) {
    return cdf.Bits(cdf.z_max()) + ExpGolombLength(static_cast<uint32_t>(z - cdf.z_max()));
  }
  return cdf.Bits(z);
}

std::vector<uint8_t> RangeEncode(std::span<const int32_t> symbols,
                                 const CdfProvider& provider) {
  RangeEncoder enc;
  for (size_t i = 0; i < symbols.size(); ++i) {
    enc.Encode(provider(i, symbols.first(i)), symbols[i]);
  }
  return enc.Finish();
}

std::vector<int32_t> RangeDecode(std::span<const uint8_t> bytes,
                                 const CdfProvider& provider, size_t count) {
  RangeDecoder dec(bytes);
  std::vector<int32_t> out;
  out.reserve(count);
  for (size_t i = 0; i < count; ++i) {
    out.push_back(dec.Decode(provider(i, out)));
  }
  return out;
}

}  // namespace wdc::coder
