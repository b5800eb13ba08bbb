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

// Decoder complexity accounting and published reference counts.

#ifndef WDC_EVAL_MACS_H_
#define WDC_EVAL_MACS_H_

#include "wdc/codec/codec.h"
#include "wdc/codec/config.h"

namespace wdc::eval {

// Published decoder MACs per pixel at about 0.15 bits/pixel.
inline constexpr double kPublishedC3MseMacs = 2925.0;
inline constexpr double kPublishedC3WdsMacs = 3149.0;
inline constexpr double kPublishedHificMacs = 609199.0;
inline constexpr double kPublishedMlicPlusMacs = 555340.0;

// Analytic decoder multiply-accumulates per pixel for an H x W image.
codec::MacBreakdown MacsPerPixel(const codec::CodecConfig& cfg, int height, int width);

}  // namespace wdc::eval

#endif  // WDC_EVAL_MACS_H_
