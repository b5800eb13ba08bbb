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

// Shared plumbing of the wdc command-line tool.

#ifndef WDC_TOOLS_CLI_H_
#define WDC_TOOLS_CLI_H_

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "wdc/imgsig/plane.h"

namespace wdc::cli {

// Set by a subcommand's parse callback, run after parsing succeeds.
using Action = std::function<int()>;

struct Context {
  std::vector<std::string> argv;
  Action action;
};

// Reproducibility record written next to every output file.
struct RunManifest {
  std::string command;
  std::vector<std::string> argv;
  std::string config_digest;  // hex, empty when the command has no config
  std::map<std::string, uint64_t> seeds;
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;

  std::string ToJson() const;
  // Writes to `path`, or to "<output>.manifest.json" when `path` is empty.
  void Write(const std::string& path, const std::string& output) const;
};

std::string Hex64(uint64_t v);

// FNV-1a over the IEEE bit patterns of every sample, so equal hashes mean
// bit-identical images.
uint64_t ImageHash(const imgsig::PixelImage& img);

void AddMetricCommands(CLI::App& app, Context& ctx);
void AddCodecCommands(CLI::App& app, Context& ctx);
void AddEvalCommands(CLI::App& app, Context& ctx);
void AddServiceCommands(CLI::App& app, Context& ctx);

}  // namespace wdc::cli

#endif  // WDC_TOOLS_CLI_H_
