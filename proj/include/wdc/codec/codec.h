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

#ifndef WDC_CODEC_CODEC_H_
#define WDC_CODEC_CODEC_H_

#include <cstdint>
#include <span>
#include <vector>

#include "wdc/autodiff/params.h"
#include "wdc/codec/config.h"
#include "wdc/codec/entropy_model.h"
#include "wdc/codec/network_quant.h"
#include "wdc/codec/state.h"
#include "wdc/codec/training.h"
#include "wdc/imgsig/plane.h"

namespace wdc::codec {

// Analytic decoder multiply-accumulates, per image pixel.
struct MacBreakdown {
  double entropy = 0.0;     // entropy network over every latent element
  double upsampling = 0.0;  // 4 per output value per upsampled channel
  double synthesis = 0.0;   // synthesis convolutions
  double total() const { return entropy + upsampling + synthesis; }
};
MacBreakdown DecoderMacs(const CodecConfig& cfg, int height, int width);

struct EncodeResult {
  std::vector<uint8_t> bytes;
  imgsig::PixelImage reconstruction;  // exactly what Decode returns
  LatentStack latents;                // quantised
  ad::ParamSet nets;                  // dequantised
  RateBreakdown coded_estimate;       // table bits plus escape bits
  std::vector<size_t> array_bytes;    // finest first
  size_t network_bytes = 0;
  size_t header_bytes = 0;
  double network_bits_estimate = 0.0;
  std::vector<TraceEntry> trace;
  double distortion = 0.0;            // of the reconstruction, under the target

  double bpp() const;
  // Latent payload bits per pixel.
  double latent_bpp() const;
};

// Optimises, quantises and writes one image. The sigma map overrides
// cfg.sigma for WD.
EncodeResult Encode(const imgsig::PixelImage& image, const CodecConfig& cfg,
                    const wd::SigmaMap* sigma = nullptr);
// Same, from a prepared target (lets callers share WD reference work).
EncodeResult Encode(const DistortionTarget& target, const CodecConfig& cfg);

struct DecodeResult {
  imgsig::PixelImage image;
  CodecConfig architecture;
  LatentStack latents;
  double macs_per_pixel = 0.0;
};

// Entropy decodes each latent array coarsest first in raster order, then
// upsamples and synthesises. Throws DecodeError on a corrupt stream.
DecodeResult Decode(std::span<const uint8_t> bytes);

struct BitAllocation {
  int height = 0;
  int width = 0;
  std::vector<double> array_bpp;  // finest (array 1) first
  double network_bpp = 0.0;
  double header_bpp = 0.0;
  double total_bpp = 0.0;

  double latent_bpp() const;
};
BitAllocation BitAllocationReport(std::span<const uint8_t> bytes);

enum class RateMeasure { kTotal, kLatent };

struct TargetedEncode {
  EncodeResult result;
  double lambda = 0.0;
  int encodes = 0;
  bool hit = false;  // rate within tolerance of the target
};

// Bisection on log(lambda) with full re-optimisation per probe until the
// measured rate is within rel_tolerance of target_bpp. Returns the closest
// probe when the budget runs out.
TargetedEncode EncodeAtRate(const DistortionTarget& target, CodecConfig cfg, double target_bpp,
                            RateMeasure measure = RateMeasure::kTotal,
                            double rel_tolerance = 0.05, int max_encodes = 12);

}  // namespace wdc::codec

#endif  // WDC_CODEC_CODEC_H_
