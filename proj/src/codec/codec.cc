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

#include "wdc/codec/codec.h"

#include <cmath>
#include <string>

#include "wdc/codec/bitstream.h"
#include "wdc/codec/synthesis.h"
#include "wdc/coder/range_coder.h"
#include "wdc/error.h"

namespace wdc::codec {
namespace {

std::vector<uint8_t> EncodeArray(const imgsig::Plane& z, const ad::ParamSet& nets, int n) {
  coder::RangeEncoder enc;
  for (int i = 0; i < z.height(); ++i) {
    for (int j = 0; j < z.width(); ++j) {
      enc.EncodeWithEscape(ElementTable(EntropyParamsAt(nets, z, n, i, j)),
                           static_cast<int32_t>(z.at(i, j)));
    }
  }
  return enc.Finish();
}

imgsig::Plane DecodeArray(std::span<const uint8_t> payload, const ad::ParamSet& nets, int n,
                          int height, int width, size_t base_offset) {
  imgsig::Plane z(height, width);
  try {
    coder::RangeDecoder dec(payload);
    for (int i = 0; i < height; ++i) {
      for (int j = 0; j < width; ++j) {
        z.at(i, j) = dec.DecodeWithEscape(ElementTable(EntropyParamsAt(nets, z, n, i, j)));
      }
    }
  } catch (const DecodeError& e) {
    throw DecodeError("latent array " + std::to_string(n) + ": " + e.what(),
                      base_offset + e.byte_offset());
  }
  return z;
}

double PixelCount(const imgsig::Tensor& t) { return static_cast<double>(t.height()) * t.width(); }

}  // namespace

MacBreakdown DecoderMacs(const CodecConfig& cfg, int height, int width) {
  cfg.Validate();
  const double pixels = static_cast<double>(height) * width;
  MacBreakdown m;
  const double h = cfg.entropy_hidden;
  const double per_element = h * (kContextTaps + 1) + h * h + 2 * h;
  double elements = 0;
  for (const auto& [rows, cols] : LatentShapes(height, width, cfg.num_arrays)) {
    elements += static_cast<double>(rows) * cols;
  }
  m.entropy = per_element * elements / pixels;
  const int in_channels = cfg.num_arrays * (1 + cfg.cr_channels);
  m.upsampling = 4.0 * in_channels;
  int in = in_channels;
  for (const SynthLayer& l : cfg.synthesis) {
    m.synthesis += static_cast<double>(l.out_channels) * in * l.kernel * l.kernel;
    in = l.out_channels;
  }
  return m;
}

double EncodeResult::bpp() const {
  return 8.0 * bytes.size() / PixelCount(reconstruction);
}

double EncodeResult::latent_bpp() const {
  size_t total = 0;
  for (size_t b : array_bytes) total += b;
  return 8.0 * total / PixelCount(reconstruction);
}

EncodeResult Encode(const imgsig::PixelImage& image, const CodecConfig& cfg,
                    const wd::SigmaMap* sigma) {
  return Encode(MakeDistortionTarget(image, cfg, sigma), cfg);
}

EncodeResult Encode(const DistortionTarget& target, const CodecConfig& cfg) {
  cfg.Validate();
  const int height = target.image.height(), width = target.image.width();
  if (height > 65535 || width > 65535) throw ConfigError("image too large for the container");
  const double pixels = PixelCount(target.image);

  TrainResult trained = RdOptimize(target, cfg);
  EncodeResult r;
  r.trace = std::move(trained.trace);
  r.latents = QuantizeLatents(ExtractLatents(trained.state, cfg.num_arrays));
  for (auto& a : r.latents.arrays) {
    for (double& v : a.values()) v = std::clamp(v, double{coder::kSymbolMin}, double{coder::kSymbolMax});
  }

  auto loss = [&](const ad::ParamSet& nets) {
    const double rate = RateEstimate(r.latents, nets).total_bits / pixels;
    return rate + cfg.lambda * target.Evaluate(Reconstruct(r.latents, nets, cfg, height, width));
  };
  NetworkQuantResult nq = QuantizeNetworks(trained.state, cfg, pixels, loss);
  r.nets = std::move(nq.nets);
  r.network_bits_estimate = nq.bits;
  r.reconstruction = Reconstruct(r.latents, r.nets, cfg, height, width);
  r.distortion = target.Evaluate(r.reconstruction);
  r.coded_estimate = CodedRateEstimate(r.latents, r.nets);

  Bitstream b;
  Header& h = b.header;
  h.height = static_cast<uint16_t>(height);
  h.width = static_cast<uint16_t>(width);
  h.num_arrays = static_cast<uint8_t>(cfg.num_arrays);
  h.cr_seed = cfg.cr_seed;
  h.cr_channels = static_cast<uint8_t>(cfg.cr_channels);
  h.entropy_hidden = static_cast<uint8_t>(cfg.entropy_hidden);
  h.synthesis = cfg.synthesis;
  h.config_digest = cfg.Digest();
  for (const QuantizedTensor& q : nq.tensors) {
    h.step_exponents.push_back(q.step_exponent);
    h.scales.push_back(q.scale);
  }
  b.network = EncodeNetworks(nq.tensors);
  r.array_bytes.assign(cfg.num_arrays, 0);
  for (int n = cfg.num_arrays; n >= 1; --n) {
    b.arrays.push_back(EncodeArray(r.latents.arrays[n - 1], r.nets, n));
    r.array_bytes[n - 1] = b.arrays.back().size();
  }
  r.bytes = SerializeBitstream(b);
  r.network_bytes = b.network.size();
  r.header_bytes = b.header_bytes;
  return r;
}

DecodeResult Decode(std::span<const uint8_t> bytes) {
  const Bitstream b = ParseBitstream(bytes);
  const Header& h = b.header;
  DecodeResult out;
  out.architecture = h.Architecture();
  const CodecConfig& cfg = out.architecture;
  std::vector<std::pair<int, int>> shapes;
  try {
    shapes = LatentShapes(h.height, h.width, h.num_arrays);
  } catch (const ConfigError& e) {
    throw DecodeError(std::string("header: ") + e.what(), 5);
  }

  const std::vector<TensorSpec> specs = NetworkTensors(cfg);
  size_t offset = b.header_bytes;
  std::vector<QuantizedTensor> tensors;
  try {
    tensors = DecodeNetworks(b.network, cfg, h.step_exponents, h.scales);
  } catch (const DecodeError& e) {
    throw DecodeError(std::string("network payload: ") + e.what(), offset + e.byte_offset());
  }
  ad::ParamSet nets;
  for (size_t t = 0; t < specs.size(); ++t) {
    nets.Add(specs[t].name, DequantizeTensor(specs[t], tensors[t], cfg));
  }
  offset += b.network.size();

  out.latents.arrays.resize(h.num_arrays);
  out.latents.quantized = true;
  for (int k = 0; k < h.num_arrays; ++k) {
    const int n = h.num_arrays - k;
    const auto [rows, cols] = shapes[n - 1];
    out.latents.arrays[n - 1] = DecodeArray(b.arrays[k], nets, n, rows, cols, offset);
    offset += b.arrays[k].size();
  }
  out.image = Reconstruct(out.latents, nets, cfg, h.height, h.width);
  out.macs_per_pixel = DecoderMacs(cfg, h.height, h.width).total();
  return out;
}

double BitAllocation::latent_bpp() const {
  double s = 0;
  for (double v : array_bpp) s += v;
  return s;
}

BitAllocation BitAllocationReport(std::span<const uint8_t> bytes) {
  const Bitstream b = ParseBitstream(bytes);
  BitAllocation a;
  a.height = b.header.height;
  a.width = b.header.width;
  const double pixels = static_cast<double>(a.height) * a.width;
  a.array_bpp.assign(b.arrays.size(), 0.0);
  for (size_t k = 0; k < b.arrays.size(); ++k) {
    a.array_bpp[b.arrays.size() - 1 - k] = 8.0 * b.arrays[k].size() / pixels;
  }
  a.network_bpp = 8.0 * b.network.size() / pixels;
  a.header_bpp = 8.0 * b.header_bytes / pixels;
  a.total_bpp = 8.0 * bytes.size() / pixels;
  return a;
}

TargetedEncode EncodeAtRate(const DistortionTarget& target, CodecConfig cfg, double target_bpp,
                            RateMeasure measure, double rel_tolerance, int max_encodes) {
  if (!(target_bpp > 0)) throw ValueError("target bpp must be positive");
  if (max_encodes < 1) throw ValueError("need at least one encode");
  TargetedEncode best;
  double best_err = INFINITY;
  double lo = NAN, hi = NAN;  // log-lambda brackets: rate below / above target
  double log_lambda = std::log(cfg.lambda);
  for (int k = 0; k < max_encodes; ++k) {
    cfg.lambda = std::exp(log_lambda);
    EncodeResult r = Encode(target, cfg);
    const double rate = measure == RateMeasure::kTotal ? r.bpp() : r.latent_bpp();
    const double err = std::abs(rate - target_bpp) / target_bpp;
    ++best.encodes;
    if (err < best_err) {
      best_err = err;
      best.result = std::move(r);
      best.lambda = cfg.lambda;
    }
    if (err <= rel_tolerance) break;
    // A larger lambda weights distortion more and spends more bits.
    if (rate < target_bpp) lo = log_lambda; else hi = log_lambda;
    if (std::isnan(hi)) log_lambda += std::log(4.0);
    else if (std::isnan(lo)) log_lambda -= std::log(4.0);
    else log_lambda = 0.5 * (lo + hi);
  }
  best.hit = best_err <= rel_tolerance;
  return best;
}

}  // namespace wdc::codec
