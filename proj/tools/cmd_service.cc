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

// serve, selftest and weights subcommands.

#include <csignal>
#include <cstdio>
#include <cstdlib>
#include <memory>

#include "acceptance/criteria.h"
#include "cli.h"
#include "wdc/error.h"
#include "wdc/features/weight_container.h"
#include "wdc/raterd/server.h"
#include "wdc/raterd/study.h"

namespace wdc::cli {
namespace {

struct ServeOptions {
  std::string config;
  std::string listen;
  std::string static_dir;
};

raterd::Server* g_server = nullptr;

extern "C" void StopServer(int) {
  if (g_server) g_server->Stop();
}

int RunServe(const ServeOptions& o) {
  raterd::StudyConfig cfg = raterd::StudyConfig::FromFile(o.config);
  // Config file, then the environment, then the flag.
  if (const char* env = std::getenv(raterd::kListenEnv)) cfg.listen = env;
  if (!o.listen.empty()) cfg.listen = o.listen;
  if (!o.static_dir.empty()) cfg.static_dir = o.static_dir;
  const auto [host, port] = raterd::ParseListen(cfg.listen);
  auto store = raterd::MakeFileImageStore(cfg);
  raterd::Study study(cfg, std::move(store));
  study.StartRefitWorker();
  raterd::Server server(study);
  g_server = &server;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  std::printf("serving %zu arms over %zu images on http://%s:%d (%lld ratings on record)\n",
              cfg.arms.size(), cfg.images.size(), host.c_str(), port,
              static_cast<long long>(study.RatingCount()));
  std::fflush(stdout);
  const bool ok = server.Listen(host, port);
  g_server = nullptr;
  if (!ok) throw IoError("cannot listen on " + cfg.listen);
  return 0;
}

struct SelftestOptions {
  std::vector<int> only;
  bool full = false;
  std::string archive;
  bool verbose = false;
};

int RunSelftest(const SelftestOptions& o) {
  acceptance::Options opt;
  opt.only.insert(o.only.begin(), o.only.end());
  opt.quick = !o.full;
  opt.archive = o.archive;
  opt.verbose = o.verbose;
  // The released-data re-fit needs an external archive; run it only when asked.
  if (opt.only.empty()) {
    for (const acceptance::Criterion& c : acceptance::Criteria()) {
      if (c.id != 11 || !o.archive.empty()) opt.only.insert(c.id);
    }
  }
  int failed = 0;
  acceptance::RunCriteria(opt, [&](const acceptance::Result& r) {
    std::printf("%s\n", acceptance::FormatResult(r).c_str());
    std::fflush(stdout);
    failed += !r.skipped && !r.pass;
  });
  return failed ? 1 : 0;
}

int RunWeightsList(const std::string& path) {
  const features::WeightContainer c = features::LoadWeightContainer(path);
  size_t total = 0;
  for (const features::NamedTensor& t : c.tensors()) {
    std::string shape;
    for (size_t i = 0; i < t.shape.size(); ++i) shape += (i ? "x" : "") + std::to_string(t.shape[i]);
    std::printf("%-32s %-16s %zu\n", t.name.c_str(), shape.c_str(), t.data.size());
    total += t.data.size();
  }
  std::printf("%zu tensors, %zu values\n", c.tensors().size(), total);
  return 0;
}

}  // namespace

void AddServiceCommands(CLI::App& app, Context& ctx) {
  auto so = std::make_shared<ServeOptions>();
  CLI::App* sv = app.add_subcommand("serve", "Run the rating study server");
  sv->add_option("--config", so->config, "Study config (key=value)")->required();
  sv->add_option("--listen", so->listen,
                 std::string("host:port, overrides the config and ") + raterd::kListenEnv);
  sv->add_option("--static-dir", so->static_dir, "Rater UI bundle served under /");
  sv->callback([so, &ctx] { ctx.action = [so] { return RunServe(*so); }; });

  auto to = std::make_shared<SelftestOptions>();
  CLI::App* st = app.add_subcommand("selftest", "Run the built-in acceptance checks");
  st->add_option("--only", to->only, "Criterion ids")->check(CLI::Range(1, 11));
  st->add_flag("--full", to->full, "Include the codec optimisation checks (minutes)");
  st->add_option("--archive", to->archive, "Released rating archive for the re-fit check");
  st->add_flag("-v,--verbose", to->verbose, "Per-case details");
  st->callback([to, &ctx] { ctx.action = [to] { return RunSelftest(*to); }; });

  auto path = std::make_shared<std::string>();
  CLI::App* wt = app.add_subcommand("weights", "Inspect feature backend weight files");
  wt->require_subcommand(1);
  CLI::App* ls = wt->add_subcommand("list", "List the tensors of a weight file");
  ls->add_option("file", *path, "Weight file")->required();
  ls->callback([path, &ctx] { ctx.action = [path] { return RunWeightsList(*path); }; });
}

}  // namespace wdc::cli
