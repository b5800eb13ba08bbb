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

#ifndef WDC_CODEC_BITSTREAM_H_
#define WDC_CODEC_BITSTREAM_H_

#include <cstdint>
#include <span>
#include <vector>

#include "wdc/codec/config.h"

namespace wdc::codec {

// Container layout, little-endian:
//   "WDC3", u8 version, u16 H, u16 W, u8 N, u64 CR seed, u8 CR channels,
//   u8 entropy width, u8 synthesis layer count, per layer {u8 out, u8 kernel,
//   u8 relu}, u64 config digest, u16 tensor count, per tensor {i8 step
//   exponent, f32 scale}, u32 network payload length, u32 network CRC,
//   per latent array from coarsest to finest {u32 length, u32 CRC},
//   u32 CRC of all preceding header bytes;
//   then the network payload and the latent payloads, coarsest first.
inline constexpr char kMagic[4] = {'W', 'D', 'C', '3'};
inline constexpr uint8_t kVersion = 1;

struct PayloadInfo {
  uint32_t length = 0;
  uint32_t crc = 0;
};

struct Header {
  uint16_t height = 0;
  uint16_t width = 0;
  uint8_t num_arrays = 0;
  uint64_t cr_seed = 0;
  uint8_t cr_channels = 0;
  uint8_t entropy_hidden = 0;
  std::vector<SynthLayer> synthesis;
  uint64_t config_digest = 0;
  std::vector<int> step_exponents;
  std::vector<float> scales;
  PayloadInfo network;
  std::vector<PayloadInfo> arrays;  // coarsest first

  // The architecture fields as a config (training fields keep defaults).
  CodecConfig Architecture() const;
};

struct Bitstream {
  Header header;
  std::vector<uint8_t> network;
  std::vector<std::vector<uint8_t>> arrays;  // coarsest first
  size_t header_bytes = 0;                   // filled by Parse and Serialize
};

// Fills lengths and CRCs from the payloads.
std::vector<uint8_t> SerializeBitstream(Bitstream& b);

// Checks magic, version, header CRC, sizes and every payload CRC. Throws
// DecodeError with the offset of the offending field or payload.
Bitstream ParseBitstream(std::span<const uint8_t> bytes);

}  // namespace wdc::codec

#endif  // WDC_CODEC_BITSTREAM_H_
