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

#include "wdc/codec/bitstream.h"

#include <string>

#include "wdc/bytes.h"
#include "wdc/error.h"

namespace wdc::codec {

CodecConfig Header::Architecture() const {
  CodecConfig cfg;
  cfg.num_arrays = num_arrays;
  cfg.cr_seed = cr_seed;
  cfg.cr_channels = cr_channels;
  cfg.entropy_hidden = entropy_hidden;
  cfg.synthesis = synthesis;
  return cfg;
}

std::vector<uint8_t> SerializeBitstream(Bitstream& b) {
  Header& h = b.header;
  if (b.arrays.size() != h.num_arrays) throw ValueError("latent payload count differs from N");
  if (h.step_exponents.size() != h.scales.size()) throw ValueError("tensor field count mismatch");
  h.network = {static_cast<uint32_t>(b.network.size()), Crc32(b.network)};
  h.arrays.clear();
  for (const auto& a : b.arrays) h.arrays.push_back({static_cast<uint32_t>(a.size()), Crc32(a)});

  ByteWriter w;
  w.Bytes({reinterpret_cast<const uint8_t*>(kMagic), 4});
  w.U8(kVersion);
  w.U16(h.height);
  w.U16(h.width);
  w.U8(h.num_arrays);
  w.U64(h.cr_seed);
  w.U8(h.cr_channels);
  w.U8(h.entropy_hidden);
  w.U8(static_cast<uint8_t>(h.synthesis.size()));
  for (const SynthLayer& l : h.synthesis) {
    w.U8(static_cast<uint8_t>(l.out_channels));
    w.U8(static_cast<uint8_t>(l.kernel));
    w.U8(l.relu ? 1 : 0);
  }
  w.U64(h.config_digest);
  w.U16(static_cast<uint16_t>(h.step_exponents.size()));
  for (size_t i = 0; i < h.step_exponents.size(); ++i) {
    w.I8(static_cast<int8_t>(h.step_exponents[i]));
    w.F32(h.scales[i]);
  }
  w.U32(h.network.length);
  w.U32(h.network.crc);
  for (const PayloadInfo& p : h.arrays) {
    w.U32(p.length);
    w.U32(p.crc);
  }
  w.U32(Crc32(w.bytes()));
  b.header_bytes = w.size();
  w.Bytes(b.network);
  for (const auto& a : b.arrays) w.Bytes(a);
  return w.Take();
}

Bitstream ParseBitstream(std::span<const uint8_t> bytes) {
  ByteReader r(bytes);
  Bitstream b;
  Header& h = b.header;
  if (r.Str(4) != std::string(kMagic, 4)) throw DecodeError("bad magic, not a WDC3 stream", 0);
  if (const uint8_t v = r.U8(); v != kVersion) {
    throw DecodeError("unsupported version " + std::to_string(v), 4);
  }
  h.height = r.U16();
  h.width = r.U16();
  h.num_arrays = r.U8();
  h.cr_seed = r.U64();
  h.cr_channels = r.U8();
  h.entropy_hidden = r.U8();
  const uint8_t layers = r.U8();
  for (int i = 0; i < layers; ++i) {
    SynthLayer l;
    l.out_channels = r.U8();
    l.kernel = r.U8();
    const uint8_t relu = r.U8();
    if (relu > 1) throw DecodeError("bad activation flag", r.position() - 1);
    l.relu = relu == 1;
    h.synthesis.push_back(l);
  }
  h.config_digest = r.U64();
  const uint16_t tensors = r.U16();
  for (int i = 0; i < tensors; ++i) {
    h.step_exponents.push_back(r.I8());
    h.scales.push_back(r.F32());
  }
  h.network.length = r.U32();
  h.network.crc = r.U32();
  for (int i = 0; i < h.num_arrays; ++i) {
    PayloadInfo p;
    p.length = r.U32();
    p.crc = r.U32();
    h.arrays.push_back(p);
  }
  const size_t crc_at = r.position();
  if (r.U32() != Crc32(bytes.first(crc_at))) throw DecodeError("header checksum mismatch", crc_at);
  b.header_bytes = r.position();

  try {
    h.Architecture().Validate();
  } catch (const ConfigError& e) {
    throw DecodeError(std::string("invalid architecture in header: ") + e.what(), 5);
  }
  if (h.height == 0 || h.width == 0) throw DecodeError("zero image size in header", 5);

  auto read_payload = [&](const PayloadInfo& p, const char* what) {
    const size_t at = r.position();
    auto s = r.Bytes(p.length);
    if (Crc32(s) != p.crc) throw DecodeError(std::string(what) + " checksum mismatch", at);
    return std::vector<uint8_t>(s.begin(), s.end());
  };
  b.network = read_payload(h.network, "network payload");
  for (int i = 0; i < h.num_arrays; ++i) {
    const std::string what = "latent array " + std::to_string(h.num_arrays - i) + " payload";
    b.arrays.push_back(read_payload(h.arrays[i], what.c_str()));
  }
  if (r.remaining() != 0) {
    throw DecodeError(std::to_string(r.remaining()) + " trailing bytes after payloads", r.position());
  }
  return b;
}

}  // namespace wdc::codec
