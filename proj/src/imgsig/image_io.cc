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

#include "wdc/imgsig/image_io.h"

#include <png.h>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <sstream>

#include "wdc/error.h"

namespace wdc::imgsig {
namespace {

std::vector<uint8_t> ReadAll(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open image file: " + path);
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (bytes.empty()) throw IoError("empty image file: " + path);
  return bytes;
}

bool IsPng(const std::vector<uint8_t>& bytes) {
  static constexpr uint8_t kSig[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  return bytes.size() >= 8 && std::memcmp(bytes.data(), kSig, 8) == 0;
}

// Interleaved 8-bit samples with `channels` components per pixel.
struct RawRaster {
  int height = 0;
  int width = 0;
  int channels = 0;
  std::vector<uint8_t> samples;
};

RawRaster DecodePng(const std::vector<uint8_t>& bytes, const std::string& path,
                    bool gray) {
  // The simplified API hides bit depth, so peek at IHDR (bytes 24) first.
  if (bytes.size() < 33) throw IoError("truncated PNG file: " + path);
  const int bit_depth = bytes[24];
  if (bit_depth > 8) {
    throw FormatError("unsupported bit depth " + std::to_string(bit_depth) +
                      " in " + path);
  }
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    throw IoError("cannot decode PNG " + path + ": " + image.message);
  }
  image.format = gray ? PNG_FORMAT_GRAY : PNG_FORMAT_RGB;
  RawRaster raster;
  raster.height = static_cast<int>(image.height);
  raster.width = static_cast<int>(image.width);
  raster.channels = gray ? 1 : 3;
  raster.samples.resize(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, raster.samples.data(), 0,
                             nullptr)) {
    std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot decode PNG " + path + ": " + msg);
  }
  return raster;
}

// Skips whitespace and '#' comments in a PNM header.
size_t SkipPnmSpace(const std::vector<uint8_t>& b, size_t pos) {
  while (pos < b.size()) {
    if (b[pos] == '#') {
      while (pos < b.size() && b[pos] != '\n') ++pos;
    } else if (std::isspace(b[pos])) {
      ++pos;
    } else {
      break;
    }
  }
  return pos;
}

int ReadPnmInt(const std::vector<uint8_t>& b, size_t& pos,
               const std::string& path) {
  pos = SkipPnmSpace(b, pos);
  if (pos >= b.size() || !std::isdigit(b[pos])) {
    throw IoError("truncated PPM header: " + path);
  }
  long v = 0;
  while (pos < b.size() && std::isdigit(b[pos])) {
    v = v * 10 + (b[pos] - '0');
    if (v > (1 << 24)) throw FormatError("PPM header value too large: " + path);
    ++pos;
  }
  return static_cast<int>(v);
}

RawRaster DecodePpm(const std::vector<uint8_t>& bytes, const std::string& path) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '5')) {
    throw FormatError("not a PNG or binary PPM/PGM file: " + path);
  }
  RawRaster raster;
  raster.channels = bytes[1] == '6' ? 3 : 1;
  size_t pos = 2;
  raster.width = ReadPnmInt(bytes, pos, path);
  raster.height = ReadPnmInt(bytes, pos, path);
  const int maxval = ReadPnmInt(bytes, pos, path);
  if (maxval > 255) {
    throw FormatError("unsupported bit depth (maxval " + std::to_string(maxval) +
                      ") in " + path);
  }
  if (maxval != 255) {
    throw FormatError("PPM maxval must be 255 in " + path);
  }
  if (raster.width < 1 || raster.height < 1) {
    throw FormatError("PPM has zero dimension: " + path);
  }
  ++pos;  // single whitespace byte after maxval
  const size_t need = static_cast<size_t>(raster.width) * raster.height *
                      raster.channels;
  if (bytes.size() < pos + need) throw IoError("truncated PPM data: " + path);
  raster.samples.assign(bytes.begin() + pos, bytes.begin() + pos + need);
  return raster;
}

RawRaster Decode(const std::string& path, bool gray) {
  const std::vector<uint8_t> bytes = ReadAll(path);
  if (IsPng(bytes)) return DecodePng(bytes, path, gray);
  return DecodePpm(bytes, path);
}

void WriteFile(const std::string& path, const std::vector<uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed: " + path);
}

bool HasPpmExtension(const std::string& path) {
  auto ends_with = [&](const std::string& ext) {
    return path.size() >= ext.size() &&
           path.compare(path.size() - ext.size(), ext.size(), ext) == 0;
  };
  return ends_with(".ppm") || ends_with(".pnm") || ends_with(".pgm");
}

std::vector<uint8_t> EncodeRaster(const RawRaster& raster, bool as_ppm) {
  if (as_ppm) {
    std::ostringstream header;
    header << (raster.channels == 3 ? "P6\n" : "P5\n") << raster.width << " "
           << raster.height << "\n255\n";
    const std::string h = header.str();
    std::vector<uint8_t> out(h.begin(), h.end());
    out.insert(out.end(), raster.samples.begin(), raster.samples.end());
    return out;
  }
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(raster.width);
  image.height = static_cast<png_uint_32>(raster.height);
  image.format = raster.channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&image, nullptr, &size, 0,
                                 raster.samples.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  std::vector<uint8_t> out(size);
  if (!png_image_write_to_memory(&image, out.data(), &size, 0,
                                 raster.samples.data(), 0, nullptr)) {
    throw IoError(std::string("PNG encode failed: ") + image.message);
  }
  out.resize(size);
  return out;
}

RawRaster ToRaster(const PixelImage& img) {
  if (img.channels() != 3) throw ShapeError("image must have 3 channels");
  RawRaster raster{img.height(), img.width(), 3, {}};
  raster.samples.resize(img.size());
  for (int y = 0; y < img.height(); ++y) {
    for (int x = 0; x < img.width(); ++x) {
      for (int c = 0; c < 3; ++c) {
        raster.samples[(static_cast<size_t>(y) * img.width() + x) * 3 + c] =
            ToByte(img.at(c, y, x));
      }
    }
  }
  return raster;
}

}  // namespace

uint8_t ToByte(double v) {
  const double clamped = std::clamp(v, 0.0, 1.0);
  return static_cast<uint8_t>(std::lround(clamped * 255.0));
}

PixelImage ReadImage(const std::string& path) {
  RawRaster raster = Decode(path, /*gray=*/false);
  PixelImage img(3, raster.height, raster.width);
  for (int y = 0; y < raster.height; ++y) {
    for (int x = 0; x < raster.width; ++x) {
      for (int c = 0; c < 3; ++c) {
        const int src = raster.channels == 3 ? c : 0;
        img.at(c, y, x) =
            raster.samples[(static_cast<size_t>(y) * raster.width + x) *
                               raster.channels + src] / 255.0;
      }
    }
  }
  return img;
}

Plane ReadGrayImage(const std::string& path) {
  RawRaster raster = Decode(path, /*gray=*/true);
  Plane p(raster.height, raster.width);
  for (int y = 0; y < raster.height; ++y) {
    for (int x = 0; x < raster.width; ++x) {
      double acc = 0.0;
      for (int c = 0; c < raster.channels; ++c) {
        acc += raster.samples[(static_cast<size_t>(y) * raster.width + x) *
                                  raster.channels + c];
      }
      p.at(y, x) = acc / (255.0 * raster.channels);
    }
  }
  return p;
}

void WriteImage(const PixelImage& img, const std::string& path) {
  WriteFile(path, EncodeRaster(ToRaster(img), HasPpmExtension(path)));
}

void WriteGrayImage(const Plane& p, const std::string& path) {
  RawRaster raster{p.height(), p.width(), 1, {}};
  raster.samples.reserve(p.size());
  for (double v : p.values()) raster.samples.push_back(ToByte(v));
  WriteFile(path, EncodeRaster(raster, HasPpmExtension(path)));
}

std::vector<uint8_t> EncodePng(const PixelImage& img) {
  return EncodeRaster(ToRaster(img), /*as_ppm=*/false);
}

}  // namespace wdc::imgsig
