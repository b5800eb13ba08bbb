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

#ifndef WDC_CODEC_NETWORK_QUANT_H_
#define WDC_CODEC_NETWORK_QUANT_H_

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "wdc/autodiff/params.h"
#include "wdc/codec/config.h"
#include "wdc/codec/state.h"

namespace wdc::codec {

// One network tensor on the uniform grid step = 2^-step_exponent. Values
// are coded as integers under a zero-mean Laplace whose scale is stored as
// a float32, so encoder and decoder build identical tables.
struct QuantizedTensor {
  std::string name;
  int step_exponent = 0;
  float scale = 0.0f;
  std::vector<int32_t> values;  // coded entries only
};

// Entries of a tensor that are stored. The masked-out taps of the first
// entropy layer are implicit zeros; every other tensor is stored whole.
std::vector<size_t> CodedIndices(const TensorSpec& spec, const CodecConfig& cfg);

// Rounds the coded entries of value onto the grid and fits the Laplace
// scale (mean magnitude, floored at 0.05).
QuantizedTensor QuantizeTensor(const TensorSpec& spec, const ad::Array& value,
                               int step_exponent, const CodecConfig& cfg);
ad::Array DequantizeTensor(const TensorSpec& spec, const QuantizedTensor& q,
                           const CodecConfig& cfg);

// Exact coded size of q's values under its table, in bits.
double TensorBits(const QuantizedTensor& q);

struct NetworkQuantResult {
  ad::ParamSet nets;  // dequantised network tensors
  std::vector<QuantizedTensor> tensors;
  double bits = 0.0;
};

// Greedy per-tensor choice of the step exponent in
// [cfg.min_step_exponent, cfg.max_step_exponent]: tensors are visited in
// bitstream order and each takes the step minimising
// bits / pixel_count + loss(nets), where later tensors are still
// unquantised. Ties go to the coarser step.
NetworkQuantResult QuantizeNetworks(const ad::ParamSet& state, const CodecConfig& cfg,
                                    double pixel_count,
                                    const std::function<double(const ad::ParamSet&)>& loss);

// Single range-coded payload of all tensors, and its inverse. Decoding
// needs the step exponents and scales from the header.
std::vector<uint8_t> EncodeNetworks(const std::vector<QuantizedTensor>& tensors);
std::vector<QuantizedTensor> DecodeNetworks(std::span<const uint8_t> payload,
                                            const CodecConfig& cfg,
                                            const std::vector<int>& step_exponents,
                                            const std::vector<float>& scales);

}  // namespace wdc::codec

#endif  // WDC_CODEC_NETWORK_QUANT_H_
