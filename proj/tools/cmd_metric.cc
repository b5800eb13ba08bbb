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

// wd and sigma subcommands.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "cli.h"
#include "json.hpp"
#include "wdc/error.h"
#include "wdc/features/features.h"
#include "wdc/imgsig/image_io.h"
#include "wdc/wdmetric/sigma.h"
#include "wdc/wdmetric/wasserstein.h"

namespace wdc::cli {
namespace {

struct WdOptions {
  std::string a, b;
  std::string sigma = "const:8";
  double display_scale = 1.0;
  std::string backend = "filterbank";
  int scales = wd::kDefaultScales;
  bool json = false;
  bool per_feature = false;
  std::string report;
  std::string manifest;
};

int RunWd(const WdOptions& o, const Context& ctx) {
  const imgsig::PixelImage a = imgsig::ReadImage(o.a);
  const imgsig::PixelImage b = imgsig::ReadImage(o.b);
  if (a.height() != b.height() || a.width() != b.width()) {
    throw ShapeError("images differ in size: " + std::to_string(a.height()) + "x" +
                     std::to_string(a.width()) + " vs " + std::to_string(b.height()) + "x" +
                     std::to_string(b.width()));
  }
  const wd::SigmaMap sigma = wd::ResolveSigmaSource(o.sigma, a.height(), a.width(), o.display_scale);
  const features::FeatureExtractor fx(features::ParseBackendSpec(o.backend));
  const wd::WDReport r = wd::WassersteinDistortion(a, b, sigma, fx, o.scales, o.sigma);
  const wd::MsePsnr m = wd::ComputeMsePsnr(a, b);
  if (o.json) {
    nlohmann::ordered_json j;
    j["wd"] = r.total;
    j["sigma"] = r.sigma_source;
    j["display_scale"] = o.display_scale;
    j["backend"] = r.backend;
    j["scales"] = r.top_scale;
    j["per_scale"] = r.per_scale;
    if (o.per_feature) {
      for (size_t i = 0; i < r.feature_ids.size(); ++i) j["per_feature"][r.feature_ids[i]] = r.per_feature[i];
    }
    j["mse"] = m.mse;
    j["psnr"] = std::isinf(m.psnr) ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(m.psnr);
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    std::printf("wd %.10g\n", r.total);
    for (size_t a_ = 0; a_ < r.per_scale.size(); ++a_) {
      std::printf("scale %zu %.10g\n", a_, r.per_scale[a_]);
    }
    if (o.per_feature) {
      for (size_t i = 0; i < r.feature_ids.size(); ++i) {
        std::printf("feature %s %.10g\n", r.feature_ids[i].c_str(), r.per_feature[i]);
      }
    }
    std::printf("mse %.10g\npsnr %.4f\n", m.mse, m.psnr);
  }
  if (!o.report.empty()) {
    std::FILE* f = std::fopen(o.report.c_str(), "wb");
    if (!f) throw IoError("cannot write " + o.report);
    const std::string text = r.Serialize();
    std::fwrite(text.data(), 1, text.size(), f);
    std::fclose(f);
  }
  if (!o.report.empty() || !o.manifest.empty()) {
    RunManifest man;
    man.command = "wd";
    man.argv = ctx.argv;
    man.inputs = {o.a, o.b};
    if (o.sigma.rfind("saliency:", 0) == 0) man.inputs.push_back(o.sigma.substr(9));
    if (!o.report.empty()) man.outputs = {o.report};
    man.Write(o.manifest, o.report);
  }
  return 0;
}

struct SigmaOptions {
  std::string saliency;
  std::string output;
  double p_min = wd::kDefaultPMin;
  double sigma_max = wd::kDefaultSigmaMax;
  double display_scale = 1.0;
  std::string manifest;
};

int RunSigma(const SigmaOptions& o, const Context& ctx) {
  if (!(o.display_scale > 0)) throw ConfigError("--display-scale must be positive");
  const imgsig::Plane s = imgsig::ReadGrayImage(o.saliency);
  const imgsig::Plane p = wd::SaliencyLikelihood(s, o.p_min);
  wd::SigmaMap sigma = wd::SigmaFromSaliency(s, o.p_min, o.sigma_max);
  for (double& v : sigma.values()) v /= o.display_scale;
  const auto [lo, hi] = std::minmax_element(sigma.values().begin(), sigma.values().end());
  std::printf("size %dx%d\nsigma min %.6g mean %.6g max %.6g\nlikelihood mean %.12g\n",
              sigma.height(), sigma.width(), *lo, sigma.Mean(), *hi, p.Mean());
  if (!o.output.empty()) {
    // Stored as sigma / sigma_max so the raster stays in [0, 1].
    imgsig::Plane scaled = sigma;
    for (double& v : scaled.values()) v = std::min(v / o.sigma_max, 1.0);
    imgsig::WriteGrayImage(scaled, o.output);
    RunManifest man;
    man.command = "sigma";
    man.argv = ctx.argv;
    man.inputs = {o.saliency};
    man.outputs = {o.output};
    man.Write(o.manifest, o.output);
  }
  return 0;
}

}  // namespace

void AddMetricCommands(CLI::App& app, Context& ctx) {
  auto wo = std::make_shared<WdOptions>();
  CLI::App* wdc = app.add_subcommand("wd", "Wasserstein distortion between two images");
  wdc->add_option("a", wo->a, "First image (PNG or PPM)")->required();
  wdc->add_option("b", wo->b, "Second image")->required();
  wdc->add_option("--sigma", wo->sigma, "const:V or saliency:PATH")->capture_default_str();
  wdc->add_option("--display-scale", wo->display_scale,
                  "Divide sigma by this factor, for images viewed downscaled")
      ->capture_default_str();
  wdc->add_option("--backend", wo->backend, "filterbank or convnet:PATH#layers")->capture_default_str();
  wdc->add_option("--scales", wo->scales, "Top pyramid level")->capture_default_str()->check(CLI::Range(0, 16));
  wdc->add_flag("--json", wo->json, "Print JSON");
  wdc->add_flag("--per-feature", wo->per_feature, "Also print every feature's term");
  wdc->add_option("--report", wo->report, "Write the key=value report to this file");
  wdc->add_option("--manifest", wo->manifest, "Manifest path");
  wdc->callback([wo, &ctx] { ctx.action = [wo, &ctx] { return RunWd(*wo, ctx); }; });

  auto so = std::make_shared<SigmaOptions>();
  CLI::App* sc = app.add_subcommand("sigma", "Sigma map from a saliency map");
  sc->add_option("--saliency", so->saliency, "8-bit grayscale saliency map")->required();
  sc->add_option("-o,--output", so->output, "Write sigma / sigma_max as a grayscale PNG");
  sc->add_option("--p-min", so->p_min, "Likelihood floor")->capture_default_str();
  sc->add_option("--sigma-max", so->sigma_max, "Sigma where the likelihood hits its floor")->capture_default_str();
  sc->add_option("--display-scale", so->display_scale, "Divide sigma by this factor")->capture_default_str();
  sc->add_option("--manifest", so->manifest, "Manifest path");
  sc->callback([so, &ctx] { ctx.action = [so, &ctx] { return RunSigma(*so, ctx); }; });
}

}  // namespace wdc::cli
