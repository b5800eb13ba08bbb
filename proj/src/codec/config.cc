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

#include "wdc/codec/config.h"

#include <charconv>
#include <cmath>
#include <sstream>

#include "wdc/error.h"
#include "wdc/imgsig/ops.h"

namespace wdc::codec {
namespace {

int ParseInt(const std::string& key, const std::string& v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': expected integer, got '" + v + "'");
  }
  return out;
}

uint64_t ParseU64(const std::string& key, const std::string& v) {
  uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("config key '" + key + "': expected unsigned integer, got '" + v + "'");
  }
  return out;
}

double ParseDouble(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("config key '" + key + "': expected number, got '" + v + "'");
}

std::string FormatDouble(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// "24x1r,24x1r,3x3": out channels x kernel, trailing r for ReLU.
std::string FormatSynthesis(const std::vector<SynthLayer>& layers) {
  std::string s;
  for (size_t i = 0; i < layers.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(layers[i].out_channels) + "x" + std::to_string(layers[i].kernel);
    if (layers[i].relu) s += "r";
  }
  return s;
}

std::vector<SynthLayer> ParseSynthesis(const std::string& v) {
  std::vector<SynthLayer> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    SynthLayer l{0, 1, false};
    if (!item.empty() && item.back() == 'r') {
      l.relu = true;
      item.pop_back();
    }
    const size_t x = item.find('x');
    if (x == std::string::npos) throw ConfigError("synthesis layer '" + item + "' needs OUTxK");
    l.out_channels = ParseInt("synthesis", item.substr(0, x));
    l.kernel = ParseInt("synthesis", item.substr(x + 1));
    out.push_back(l);
  }
  return out;
}

}  // namespace

const char* DistortionName(Distortion d) { return d == Distortion::kMse ? "mse" : "wd"; }

void CodecConfig::Validate() const {
  if (num_arrays < 1 || num_arrays > 16) throw ConfigError("num_arrays must be in [1, 16]");
  if (cr_channels < 0 || cr_channels > 8) throw ConfigError("cr_channels must be in [0, 8]");
  if (synthesis.empty()) throw ConfigError("synthesis needs at least one layer");
  for (const SynthLayer& l : synthesis) {
    if (l.out_channels < 1 || l.out_channels > 255) throw ConfigError("synthesis width out of range");
    if (l.kernel < 1 || l.kernel > 7 || l.kernel % 2 == 0) {
      throw ConfigError("synthesis kernels must be odd and at most 7");
    }
  }
  if (synthesis.back().out_channels != 3) throw ConfigError("last synthesis layer must output 3 channels");
  if (entropy_hidden < 1 || entropy_hidden > 255) throw ConfigError("entropy_hidden out of range");
  if (!(lambda > 0) || !std::isfinite(lambda)) throw ConfigError("lambda must be positive");
  if (wd_scales < 0 || wd_scales > 12) throw ConfigError("wd_scales must be in [0, 12]");
  if (steps < 0) throw ConfigError("steps must be non-negative");
  if (!(noise_fraction >= 0 && noise_fraction <= 1)) throw ConfigError("noise_fraction must be in [0, 1]");
  if (!(learning_rate > 0)) throw ConfigError("learning_rate must be positive");
  if (!(ste_lr_factor > 0)) throw ConfigError("ste_lr_factor must be positive");
  if (!(latent_lr_scale > 0)) throw ConfigError("latent_lr_scale must be positive");
  if (log_interval < 1) throw ConfigError("log_interval must be positive");
  if (min_step_exponent < -8 || max_step_exponent > 24 || min_step_exponent > max_step_exponent) {
    throw ConfigError("bad network quantisation step range");
  }
}

std::string CodecConfig::ToText() const {
  std::ostringstream os;
  os << "num_arrays=" << num_arrays << "\n"
     << "cr_channels=" << cr_channels << "\n"
     << "cr_seed=" << cr_seed << "\n"
     << "synthesis=" << FormatSynthesis(synthesis) << "\n"
     << "entropy_hidden=" << entropy_hidden << "\n"
     << "lambda=" << FormatDouble(lambda) << "\n"
     << "distortion=" << DistortionName(distortion) << "\n"
     << "sigma=" << sigma << "\n"
     << "backend=" << backend << "\n"
     << "wd_scales=" << wd_scales << "\n"
     << "steps=" << steps << "\n"
     << "noise_fraction=" << FormatDouble(noise_fraction) << "\n"
     << "learning_rate=" << FormatDouble(learning_rate) << "\n"
     << "ste_lr_factor=" << FormatDouble(ste_lr_factor) << "\n"
     << "latent_lr_scale=" << FormatDouble(latent_lr_scale) << "\n"
     << "seed=" << seed << "\n"
     << "log_interval=" << log_interval << "\n"
     << "min_step_exponent=" << min_step_exponent << "\n"
     << "max_step_exponent=" << max_step_exponent << "\n";
  return os.str();
}

void CodecConfig::Set(const std::string& key, const std::string& v) {
  if (key == "num_arrays") num_arrays = ParseInt(key, v);
  else if (key == "cr_channels") cr_channels = ParseInt(key, v);
  else if (key == "cr_seed") cr_seed = ParseU64(key, v);
  else if (key == "synthesis") synthesis = ParseSynthesis(v);
  else if (key == "entropy_hidden") entropy_hidden = ParseInt(key, v);
  else if (key == "lambda") lambda = ParseDouble(key, v);
  else if (key == "distortion") {
    if (v == "mse") distortion = Distortion::kMse;
    else if (v == "wd") distortion = Distortion::kWd;
    else throw ConfigError("distortion must be mse or wd, got '" + v + "'");
  }
  else if (key == "sigma") sigma = v;
  else if (key == "backend") backend = v;
  else if (key == "wd_scales") wd_scales = ParseInt(key, v);
  else if (key == "steps") steps = ParseInt(key, v);
  else if (key == "noise_fraction") noise_fraction = ParseDouble(key, v);
  else if (key == "learning_rate") learning_rate = ParseDouble(key, v);
  else if (key == "ste_lr_factor") ste_lr_factor = ParseDouble(key, v);
  else if (key == "latent_lr_scale") latent_lr_scale = ParseDouble(key, v);
  else if (key == "seed") seed = ParseU64(key, v);
  else if (key == "log_interval") log_interval = ParseInt(key, v);
  else if (key == "min_step_exponent") min_step_exponent = ParseInt(key, v);
  else if (key == "max_step_exponent") max_step_exponent = ParseInt(key, v);
  else throw ConfigError("unknown config key '" + key + "'");
}

CodecConfig CodecConfig::FromText(const std::string& text) {
  CodecConfig cfg;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const size_t a = line.find_first_not_of(" \t\r");
    if (a == std::string::npos) continue;
    line = line.substr(a, line.find_last_not_of(" \t\r") - a + 1);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected key=value");
    }
    cfg.Set(line.substr(0, eq), line.substr(eq + 1));
  }
  cfg.Validate();
  return cfg;
}

uint64_t CodecConfig::Digest() const {
  uint64_t h = 0x9e3779b97f4a7c15ull;
  for (unsigned char c : ToText()) h = imgsig::SplitMix64(h ^ c);
  return h;
}

std::vector<std::pair<int, int>> LatentShapes(int height, int width, int num_arrays) {
  if (height < 8 || width < 8) {
    throw ConfigError("image must be at least 8x8, got " + std::to_string(height) + "x" +
                      std::to_string(width));
  }
  // Array n needs at least one pixel per 2^(n-1) block of the smaller side.
  int levels = 1;
  while ((1 << levels) <= std::min(height, width)) ++levels;
  if (num_arrays > levels) {
    throw ConfigError(std::to_string(num_arrays) + " latent arrays need an image of at least " +
                      std::to_string(1 << (num_arrays - 1)) + " pixels per side");
  }
  std::vector<std::pair<int, int>> shapes;
  for (int n = 0; n < num_arrays; ++n) {
    const int d = 1 << n;
    shapes.emplace_back((height + d - 1) / d, (width + d - 1) / d);
  }
  return shapes;
}

}  // namespace wdc::codec
