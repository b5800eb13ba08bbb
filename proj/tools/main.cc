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

#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>

#include "cli.h"
#include "json.hpp"
#include "wdc/error.h"

namespace wdc::cli {

std::string RunManifest::ToJson() const {
  nlohmann::ordered_json j;
  j["tool"] = "wdc";
  j["version"] = WDC_VERSION;
  j["command"] = command;
  j["argv"] = argv;
  if (!config_digest.empty()) j["config_digest"] = config_digest;
  j["seeds"] = seeds;
  j["inputs"] = inputs;
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

void RunManifest::Write(const std::string& path, const std::string& output) const {
  const std::string target = path.empty() ? output + ".manifest.json" : path;
  std::ofstream f(target, std::ios::binary);
  f << ToJson();
  if (!f) throw IoError("cannot write manifest " + target);
}

std::string Hex64(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

uint64_t ImageHash(const imgsig::PixelImage& img) {
  uint64_t h = 0xcbf29ce484222325ull;
  auto mix = [&h](uint64_t word, int bytes) {
    for (int i = 0; i < bytes; ++i) {
      h ^= (word >> (8 * i)) & 0xff;
      h *= 0x100000001b3ull;
    }
  };
  mix(static_cast<uint64_t>(img.channels()), 4);
  mix(static_cast<uint64_t>(img.height()), 4);
  mix(static_cast<uint64_t>(img.width()), 4);
  for (double v : img.values()) {
    uint64_t bits;
    std::memcpy(&bits, &v, 8);
    mix(bits, 8);
  }
  return h;
}

}  // namespace wdc::cli

int main(int argc, char** argv) {
  using namespace wdc::cli;
  CLI::App app{"Wasserstein-distortion image codec and evaluation tools", "wdc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", WDC_VERSION);
  Context ctx;
  ctx.argv.assign(argv, argv + argc);
  AddMetricCommands(app, ctx);
  AddCodecCommands(app, ctx);
  AddEvalCommands(app, ctx);
  AddServiceCommands(app, ctx);
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "wdc: %s\n\n", e.what());
    const CLI::App* sub = &app;
    for (const CLI::App* s : app.get_subcommands()) sub = s;
    std::fprintf(stderr, "%s", sub->help().c_str());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wdc: error: %s\n", e.what());
    return 1;
  }
  if (!ctx.action) return 0;
  try {
    return ctx.action();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "wdc %s: error: %s\n", app.get_subcommands().front()->get_name().c_str(),
                 e.what());
  }
  return 1;
}
