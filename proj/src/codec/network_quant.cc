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

#include "wdc/codec/network_quant.h"

#include <cmath>

#include "wdc/codec/entropy_model.h"
#include "wdc/coder/range_coder.h"
#include "wdc/error.h"

namespace wdc::codec {
namespace {

constexpr double kMinScale = 0.05;

coder::QuantizedCdf WeightTable(float scale) {
  const auto [lo, hi] = coder::CodingRange(0.0, scale);
  return coder::LaplaceCdfTable(0.0, scale, lo, hi);
}

const TensorSpec& FindSpec(const std::vector<TensorSpec>& specs, const std::string& name) {
  for (const TensorSpec& s : specs) {
    if (s.name == name) return s;
  }
  throw ConfigError("unknown network tensor '" + name + "'");
}

}  // namespace

std::vector<size_t> CodedIndices(const TensorSpec& spec, const CodecConfig& cfg) {
  std::vector<size_t> idx;
  if (spec.name == "ent.w1") {
    const ad::Array mask = EntropyMask(cfg.entropy_hidden);
    for (size_t i = 0; i < mask.size(); ++i) {
      if (mask.data[i] != 0.0) idx.push_back(i);
    }
  } else {
    idx.resize(ad::ShapeSize(spec.shape));
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  }
  return idx;
}

QuantizedTensor QuantizeTensor(const TensorSpec& spec, const ad::Array& value, int step_exponent,
                               const CodecConfig& cfg) {
  QuantizedTensor q;
  q.name = spec.name;
  q.step_exponent = step_exponent;
  const double inv_step = std::ldexp(1.0, step_exponent);
  double sum = 0;
  for (size_t i : CodedIndices(spec, cfg)) {
    const double r = std::round(value.data.at(i) * inv_step);
    const double c = std::clamp(r, double{coder::kSymbolMin}, double{coder::kSymbolMax});
    q.values.push_back(static_cast<int32_t>(c));
    sum += std::abs(c);
  }
  const double mean = q.values.empty() ? 0.0 : sum / q.values.size();
  q.scale = static_cast<float>(std::max(mean, kMinScale));
  return q;
}

ad::Array DequantizeTensor(const TensorSpec& spec, const QuantizedTensor& q, const CodecConfig& cfg) {
  ad::Array a(spec.shape);
  const std::vector<size_t> idx = CodedIndices(spec, cfg);
  if (idx.size() != q.values.size()) {
    throw ShapeError("tensor '" + spec.name + "' expects " + std::to_string(idx.size()) + " values");
  }
  const double step = std::ldexp(1.0, -q.step_exponent);
  for (size_t k = 0; k < idx.size(); ++k) a.data[idx[k]] = q.values[k] * step;
  return a;
}

double TensorBits(const QuantizedTensor& q) {
  const coder::QuantizedCdf cdf = WeightTable(q.scale);
  double bits = 0;
  for (int32_t v : q.values) bits += coder::EscapedBits(cdf, v);
  return bits;
}

NetworkQuantResult QuantizeNetworks(const ad::ParamSet& state, const CodecConfig& cfg,
                                    double pixel_count,
                                    const std::function<double(const ad::ParamSet&)>& loss) {
  const std::vector<TensorSpec> specs = NetworkTensors(cfg);
  ad::ParamSet nets;
  for (const TensorSpec& s : specs) nets.Add(s.name, state.Get(s.name));

  NetworkQuantResult r;
  for (size_t t = 0; t < specs.size(); ++t) {
    const TensorSpec& spec = specs[t];
    const ad::Array original = nets.Get(spec.name);
    double best_cost = INFINITY;
    QuantizedTensor best;
    for (int e = cfg.min_step_exponent; e <= cfg.max_step_exponent; ++e) {
      QuantizedTensor q = QuantizeTensor(spec, original, e, cfg);
      nets.GetMutable(spec.name) = DequantizeTensor(spec, q, cfg);
      const double cost = TensorBits(q) / pixel_count + loss(nets);
      if (cost < best_cost) {
        best_cost = cost;
        best = std::move(q);
      }
    }
    if (best.name.empty()) throw ValueError("no finite quantisation for tensor '" + spec.name + "'");
    nets.GetMutable(spec.name) = DequantizeTensor(spec, best, cfg);
    r.bits += TensorBits(best);
    r.tensors.push_back(std::move(best));
  }
  r.nets = std::move(nets);
  return r;
}

std::vector<uint8_t> EncodeNetworks(const std::vector<QuantizedTensor>& tensors) {
  coder::RangeEncoder enc;
  for (const QuantizedTensor& q : tensors) {
    const coder::QuantizedCdf cdf = WeightTable(q.scale);
    for (int32_t v : q.values) enc.EncodeWithEscape(cdf, v);
  }
  return enc.Finish();
}

std::vector<QuantizedTensor> DecodeNetworks(std::span<const uint8_t> payload,
                                            const CodecConfig& cfg,
                                            const std::vector<int>& step_exponents,
                                            const std::vector<float>& scales) {
  const std::vector<TensorSpec> specs = NetworkTensors(cfg);
  if (step_exponents.size() != specs.size() || scales.size() != specs.size()) {
    throw DecodeError("network tensor count mismatch", 0);
  }
  coder::RangeDecoder dec(payload);
  std::vector<QuantizedTensor> out;
  for (size_t t = 0; t < specs.size(); ++t) {
    if (!(scales[t] > 0) || !std::isfinite(scales[t])) {
      throw DecodeError("bad scale for tensor '" + specs[t].name + "'", 0);
    }
    QuantizedTensor q;
    q.name = specs[t].name;
    q.step_exponent = step_exponents[t];
    q.scale = scales[t];
    const coder::QuantizedCdf cdf = WeightTable(q.scale);
    const size_t count = CodedIndices(FindSpec(specs, q.name), cfg).size();
    for (size_t k = 0; k < count; ++k) q.values.push_back(dec.DecodeWithEscape(cdf));
    out.push_back(std::move(q));
  }
  return out;
}

}  // namespace wdc::codec
