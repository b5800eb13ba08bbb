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

#ifndef WDC_CODEC_CONFIG_H_
#define WDC_CODEC_CONFIG_H_

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace wdc::codec {

enum class Distortion { kMse, kWd };

const char* DistortionName(Distortion d);

struct SynthLayer {
  int out_channels;
  int kernel;  // odd, square
  bool relu;
  bool operator==(const SynthLayer&) const = default;
};

struct CodecConfig {
  // Latent arrays; array n (1-based) has ceil(H / 2^(n-1)) rows.
  int num_arrays = 7;
  // Gaussian common-randomness channels per latent resolution.
  int cr_channels = 1;
  uint64_t cr_seed = 42;
  // Synthesis stack applied to the upsampled latents and noise. The last
  // layer must produce 3 channels.
  std::vector<SynthLayer> synthesis = {{24, 1, true}, {24, 1, true}, {3, 3, false}};
  // Width of the two hidden layers of the entropy network.
  int entropy_hidden = 16;

  double lambda = 200.0;
  Distortion distortion = Distortion::kMse;
  std::string sigma = "const:8";      // const:V or saliency:PATH
  std::string backend = "filterbank";
  int wd_scales = 6;

  // Optimisation schedule: a noise phase followed by straight-through
  // rounding for the remaining steps.
  int steps = 1000;
  double noise_fraction = 0.6;
  double learning_rate = 1e-2;
  double ste_lr_factor = 0.2;
  double latent_lr_scale = 1.0;
  uint64_t seed = 1;
  int log_interval = 50;

  // Candidate network quantisation steps are 2^-e for e in this range.
  int min_step_exponent = 2;
  int max_step_exponent = 12;

  // Throws ConfigError.
  void Validate() const;

  // Canonical key=value text; Parse accepts any subset of the keys and
  // keeps defaults for the rest. Throws ConfigError on unknown keys or bad
  // values.
  std::string ToText() const;
  static CodecConfig FromText(const std::string& text);
  void Set(const std::string& key, const std::string& value);

  // 64-bit digest of ToText().
  uint64_t Digest() const;
};

// (rows, cols) of every latent array, finest first. Throws ConfigError when
// the image is smaller than 8x8 or has fewer than num_arrays dyadic levels.
std::vector<std::pair<int, int>> LatentShapes(int height, int width, int num_arrays);

}  // namespace wdc::codec

#endif  // WDC_CODEC_CONFIG_H_
