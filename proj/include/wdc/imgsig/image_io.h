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

#ifndef WDC_IMGSIG_IMAGE_IO_H_
#define WDC_IMGSIG_IMAGE_IO_H_

#include <cstdint>
#include <string>
#include <vector>

#include "wdc/imgsig/plane.h"

namespace wdc::imgsig {

// Reads an 8-bit PNG (gray, gray+alpha, RGB or RGBA) or binary PPM (P6,
// maxval 255) into a 3-channel image scaled to [0, 1]. Gray inputs are
// replicated across channels; alpha is dropped. The format is chosen from the
// file signature, not the extension.
PixelImage ReadImage(const std::string& path);

// Writes 8-bit RGB. Values are clamped to [0, 1] and rounded to the nearest
// code. ".ppm"/".pnm" paths produce P6, anything else PNG.
void WriteImage(const PixelImage& img, const std::string& path);

// Reads a single-channel 8-bit raster (e.g. a saliency map). RGB inputs are
// reduced to the channel mean.
Plane ReadGrayImage(const std::string& path);
void WriteGrayImage(const Plane& p, const std::string& path);

// Encodes an image as PNG bytes in memory.
std::vector<uint8_t> EncodePng(const PixelImage& img);

// 8-bit quantisation used by WriteImage.
uint8_t ToByte(double v);

}  // namespace wdc::imgsig

#endif  // WDC_IMGSIG_IMAGE_IO_H_
