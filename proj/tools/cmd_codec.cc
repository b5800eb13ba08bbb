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

// encode, decode, allocate and macs subcommands.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <list>
#include <memory>
#include <optional>
#include <sstream>

#include "cli.h"
#include "wdc/bytes.h"
#include "wdc/codec/codec.h"
#include "wdc/error.h"
#include "wdc/eval/macs.h"
#include "wdc/imgsig/image_io.h"

namespace wdc::cli {
namespace {

namespace fs = std::filesystem;

// Defaults, then the config file, then --set pairs, then dedicated flags.
struct ConfigOptions {
  std::string file;
  std::vector<std::string> sets;
  // A list, so the bound option targets never move.
  std::list<std::pair<std::string, std::optional<std::string>>> flags;

  void AddFlag(CLI::App* app, const std::string& flag, const std::string& key,
               const std::string& help) {
    flags.emplace_back(key, std::nullopt);
    app->add_option(flag, flags.back().second, help);
  }

  codec::CodecConfig Build() const {
    codec::CodecConfig cfg;
    if (!file.empty()) {
      std::ifstream f(file);
      if (!f) throw IoError("cannot read config " + file);
      std::stringstream ss;
      ss << f.rdbuf();
      cfg = codec::CodecConfig::FromText(ss.str());
    }
    for (const std::string& kv : sets) {
      const size_t eq = kv.find('=');
      if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + kv + "'");
      cfg.Set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    for (const auto& [key, value] : flags) {
      if (value) cfg.Set(key, *value);
    }
    cfg.Validate();
    return cfg;
  }
};

void AddConfigOptions(CLI::App* app, ConfigOptions& c) {
  app->add_option("--config", c.file, "key=value codec config file");
  app->add_option("--set", c.sets, "Override one config key (key=value), repeatable");
}

struct EncodeOptions {
  std::vector<std::string> inputs;
  std::string output;
  std::string output_dir;
  std::string reconstruction;
  std::optional<double> bpp_target;
  std::string rate_measure = "total";
  double tolerance = 0.05;
  int max_encodes = 12;
  bool dump_config = false;
  bool verbose = false;
  std::string manifest;
  ConfigOptions config;
};

struct EncodeOutcome {
  std::string line;
  std::string error;
};

EncodeOutcome EncodeOne(const EncodeOptions& o, const codec::CodecConfig& cfg,
                        const std::string& input, const std::string& output,
                        const std::string& recon_path, const Context& ctx) {
  const imgsig::PixelImage img = imgsig::ReadImage(input);
  codec::EncodeResult e;
  double lambda = cfg.lambda;
  std::string extra;
  if (o.bpp_target) {
    const codec::DistortionTarget target = codec::MakeDistortionTarget(img, cfg);
    const codec::RateMeasure measure =
        o.rate_measure == "latent" ? codec::RateMeasure::kLatent : codec::RateMeasure::kTotal;
    codec::TargetedEncode t =
        codec::EncodeAtRate(target, cfg, *o.bpp_target, measure, o.tolerance, o.max_encodes);
    e = std::move(t.result);
    lambda = t.lambda;
    char buf[160];
    std::snprintf(buf, sizeof buf, ", lambda %.6g after %d encodes%s", t.lambda, t.encodes,
                  t.hit ? "" : " (target missed)");
    extra = buf;
  } else {
    e = codec::Encode(img, cfg);
  }
  WriteFileBytes(output, e.bytes);
  if (!recon_path.empty()) imgsig::WriteImage(e.reconstruction, recon_path);
  RunManifest man;
  man.command = "encode";
  man.argv = ctx.argv;
  codec::CodecConfig used = cfg;
  used.lambda = lambda;
  man.config_digest = Hex64(used.Digest());
  man.seeds = {{"seed", cfg.seed}, {"cr_seed", cfg.cr_seed}};
  man.inputs = {input};
  if (cfg.sigma.rfind("saliency:", 0) == 0) man.inputs.push_back(cfg.sigma.substr(9));
  man.outputs = {output};
  if (!recon_path.empty()) man.outputs.push_back(recon_path);
  man.Write(o.inputs.size() == 1 ? o.manifest : "", output);
  std::string trace;
  if (o.verbose) {
    for (const codec::TraceEntry& t : e.trace) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "  step %d%s loss %.6g rate %.4f bpp distortion %.6g\n",
                    t.step, t.rounding ? " (rounding)" : "", t.loss, t.rate_bpp, t.distortion);
      trace += buf;
    }
  }
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%s -> %s: %zu bytes, %.4f bpp (latent %.4f), %s %.6g%s, reconstruction %s\n",
                input.c_str(), output.c_str(), e.bytes.size(), e.bpp(), e.latent_bpp(),
                codec::DistortionName(cfg.distortion), e.distortion, extra.c_str(),
                Hex64(ImageHash(e.reconstruction)).c_str());
  return {trace + buf, ""};
}

int RunEncode(const EncodeOptions& o, const Context& ctx) {
  const codec::CodecConfig cfg = o.config.Build();
  if (o.dump_config) {
    std::printf("%s", cfg.ToText().c_str());
    return 0;
  }
  if (o.inputs.empty()) throw ConfigError("--input is required");
  if (o.inputs.size() > 1 && o.output_dir.empty()) {
    throw ConfigError("several inputs need --output-dir");
  }
  if (o.inputs.size() == 1 && o.output.empty() && o.output_dir.empty()) {
    throw ConfigError("--output or --output-dir is required");
  }
  if (o.inputs.size() > 1 && !o.reconstruction.empty()) {
    throw ConfigError("--reconstruction takes a single input; batch mode writes <stem>.png");
  }
  if (!o.output_dir.empty()) fs::create_directories(o.output_dir);
  std::vector<EncodeOutcome> out(o.inputs.size());
  const long n = static_cast<long>(o.inputs.size());
  // Images are independent; the kernels inside each encode run serially
  // here because nested parallel regions are inactive.
#pragma omp parallel for schedule(dynamic) if (n > 1)
  for (long i = 0; i < n; ++i) {
    const std::string& in = o.inputs[i];
    std::string output = o.output, recon = o.reconstruction;
    if (!o.output_dir.empty()) {
      const std::string stem = fs::path(in).stem().string();
      output = (fs::path(o.output_dir) / (stem + ".wdc")).string();
      if (n > 1) recon = (fs::path(o.output_dir) / (stem + ".png")).string();
    }
    try {
      out[i] = EncodeOne(o, cfg, in, output, recon, ctx);
    } catch (const std::exception& e) {
      out[i].error = in + ": " + e.what();
    }
  }
  int failed = 0;
  for (const EncodeOutcome& r : out) {
    if (!r.error.empty()) {
      std::fprintf(stderr, "wdc encode: error: %s\n", r.error.c_str());
      ++failed;
    } else {
      std::printf("%s", r.line.c_str());
    }
  }
  return failed ? 1 : 0;
}

struct DecodeOptions {
  std::string input;
  std::string output;
  std::string manifest;
};

int RunDecode(const DecodeOptions& o, const Context& ctx) {
  const std::vector<uint8_t> bytes = ReadFileBytes(o.input);
  const codec::DecodeResult d = codec::Decode(bytes);
  std::printf("%s: %dx%d, %zu bytes, %.4f bpp, %.1f MACs/pixel, reconstruction %s\n",
              o.input.c_str(), d.image.height(), d.image.width(), bytes.size(),
              8.0 * bytes.size() / (static_cast<double>(d.image.height()) * d.image.width()),
              d.macs_per_pixel, Hex64(ImageHash(d.image)).c_str());
  if (!o.output.empty()) {
    imgsig::WriteImage(d.image, o.output);
    RunManifest man;
    man.command = "decode";
    man.argv = ctx.argv;
    man.config_digest = Hex64(d.architecture.Digest());
    man.seeds = {{"cr_seed", d.architecture.cr_seed}};
    man.inputs = {o.input};
    man.outputs = {o.output};
    man.Write(o.manifest, o.output);
  }
  return 0;
}

struct AllocateOptions {
  std::vector<std::string> inputs;
  std::string csv;
};

int RunAllocate(const AllocateOptions& o) {
  std::ofstream csv;
  if (!o.csv.empty()) {
    csv.open(o.csv);
    if (!csv) throw IoError("cannot write " + o.csv);
    csv << "file,height,width,part,bpp,fraction\n";
  }
  for (const std::string& path : o.inputs) {
    const codec::BitAllocation a = codec::BitAllocationReport(ReadFileBytes(path));
    double latent = 0;
    for (double v : a.array_bpp) latent += v;
    std::printf("%s: %dx%d, total %.4f bpp (latents %.4f, networks %.4f, header %.4f)\n",
                path.c_str(), a.height, a.width, a.total_bpp, latent, a.network_bpp, a.header_bpp);
    for (size_t i = 0; i < a.array_bpp.size(); ++i) {
      const double frac = latent > 0 ? a.array_bpp[i] / latent : 0;
      std::printf("  array %zu  %.5f bpp  %5.1f%% of latent bits\n", i + 1, a.array_bpp[i], 100 * frac);
      if (csv.is_open()) {
        csv << path << ',' << a.height << ',' << a.width << ",array" << i + 1 << ','
            << a.array_bpp[i] << ',' << frac << '\n';
      }
    }
    if (csv.is_open()) {
      csv << path << ',' << a.height << ',' << a.width << ",networks," << a.network_bpp << ",\n";
      csv << path << ',' << a.height << ',' << a.width << ",header," << a.header_bpp << ",\n";
    }
  }
  return 0;
}

struct MacsOptions {
  int height = 512;
  int width = 768;
  std::string bitstream;
  ConfigOptions config;
};

int RunMacs(const MacsOptions& o) {
  codec::CodecConfig cfg;
  int h = o.height, w = o.width;
  if (!o.bitstream.empty()) {
    const codec::DecodeResult d = codec::Decode(ReadFileBytes(o.bitstream));
    cfg = d.architecture;
    h = d.image.height();
    w = d.image.width();
  } else {
    cfg = o.config.Build();
  }
  const codec::MacBreakdown m = eval::MacsPerPixel(cfg, h, w);
  codec::CodecConfig no_cr = cfg;
  no_cr.cr_channels = 0;
  const double base = eval::MacsPerPixel(no_cr, h, w).total();
  std::printf("decoder MACs/pixel at %dx%d: %.1f\n", h, w, m.total());
  std::printf("  entropy networks  %.1f\n  upsampling        %.1f\n  synthesis         %.1f\n",
              m.entropy, m.upsampling, m.synthesis);
  std::printf("  common randomness %+.1f%% over the same decoder without it\n",
              100 * (m.total() / base - 1));
  std::printf("published: C3/MSE %.0f, C3/WDs %.0f, HiFiC %.0f (%.0fx ours), MLIC+ %.0f (%.0fx ours)\n",
              eval::kPublishedC3MseMacs, eval::kPublishedC3WdsMacs, eval::kPublishedHificMacs,
              eval::kPublishedHificMacs / m.total(), eval::kPublishedMlicPlusMacs,
              eval::kPublishedMlicPlusMacs / m.total());
  return 0;
}

}  // namespace

void AddCodecCommands(CLI::App& app, Context& ctx) {
  auto eo = std::make_shared<EncodeOptions>();
  CLI::App* enc = app.add_subcommand("encode", "Overfit the codec to images and write bitstreams");
  enc->add_option("-i,--input", eo->inputs, "Input image(s); several run in parallel")
      ;
  enc->add_option("-o,--output", eo->output, "Bitstream path for a single input");
  enc->add_option("--output-dir", eo->output_dir, "Directory for <stem>.wdc outputs");
  enc->add_option("--reconstruction", eo->reconstruction, "Also write the decoded image (PNG)");
  enc->add_option("--bpp-target", eo->bpp_target, "Search lambda for this rate");
  enc->add_option("--rate-measure", eo->rate_measure, "Rate the target applies to")
      ->check(CLI::IsMember({"total", "latent"}))
      ->capture_default_str();
  enc->add_option("--tolerance", eo->tolerance, "Relative rate tolerance")->capture_default_str();
  enc->add_option("--max-encodes", eo->max_encodes, "Encode budget of the rate search")->capture_default_str();
  AddConfigOptions(enc, eo->config);
  eo->config.AddFlag(enc, "--lambda", "lambda", "Rate-distortion multiplier");
  eo->config.AddFlag(enc, "--distortion", "distortion", "mse or wd");
  eo->config.AddFlag(enc, "--sigma", "sigma", "const:V or saliency:PATH");
  eo->config.AddFlag(enc, "--backend", "backend", "Feature backend for wd");
  eo->config.AddFlag(enc, "--seed", "seed", "Initialisation and noise seed");
  eo->config.AddFlag(enc, "--cr-seed", "cr_seed", "Common randomness seed");
  eo->config.AddFlag(enc, "--steps", "steps", "Optimisation steps");
  enc->add_flag("--dump-config", eo->dump_config, "Print the effective config and exit");
  enc->add_flag("-v,--verbose", eo->verbose, "Print the optimisation trace");
  enc->add_option("--manifest", eo->manifest, "Manifest path (single input)");
  enc->callback([eo, &ctx] { ctx.action = [eo, &ctx] { return RunEncode(*eo, ctx); }; });

  auto dopt = std::make_shared<DecodeOptions>();
  CLI::App* dec = app.add_subcommand("decode", "Decode a bitstream");
  dec->add_option("-i,--input", dopt->input, "Bitstream")->required();
  dec->add_option("-o,--output", dopt->output, "Output image (PNG or PPM)");
  dec->add_option("--manifest", dopt->manifest, "Manifest path");
  dec->callback([dopt, &ctx] { ctx.action = [dopt, &ctx] { return RunDecode(*dopt, ctx); }; });

  auto ao = std::make_shared<AllocateOptions>();
  CLI::App* al = app.add_subcommand("allocate", "Bits per latent array of bitstreams");
  al->add_option("inputs", ao->inputs, "Bitstreams")->required();
  al->add_option("--csv", ao->csv, "Also write the table as CSV");
  al->callback([ao, &ctx] { ctx.action = [ao] { return RunAllocate(*ao); }; });

  auto mo = std::make_shared<MacsOptions>();
  CLI::App* mc = app.add_subcommand("macs", "Decoder multiply-accumulates per pixel");
  mc->add_option("--height", mo->height, "Image height")->capture_default_str();
  mc->add_option("--width", mo->width, "Image width")->capture_default_str();
  mc->add_option("--bitstream", mo->bitstream, "Take architecture and size from a bitstream")
      ;
  AddConfigOptions(mc, mo->config);
  mc->callback([mo, &ctx] { ctx.action = [mo] { return RunMacs(*mo); }; });
}

}  // namespace wdc::cli
