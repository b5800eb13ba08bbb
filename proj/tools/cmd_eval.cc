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

// elo-fit and predictivity subcommands.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <set>

#include "cli.h"
#include "json.hpp"
#include "wdc/error.h"
#include "wdc/eval/elo.h"
#include "wdc/eval/published.h"
#include "wdc/eval/records.h"
#include "wdc/eval/stats.h"

namespace wdc::cli {
namespace {

std::string Num(std::optional<double> v) {
  if (!v) return "n/a";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", *v);
  return buf;
}

struct EloOptions {
  std::string ratings;
  std::string arms;
  int bootstrap = 0;
  double level = 0.99;
  uint64_t seed = 1;
  double cap = 800;
  bool compare_published = false;
  std::string output;
  std::string manifest;
};

int RunEloFit(const EloOptions& o, const Context& ctx) {
  const std::vector<eval::RatingRecord> ratings = eval::ReadRatingsJsonl(o.ratings);
  std::vector<eval::MethodArm> arms;
  std::vector<std::string> extra;
  if (!o.arms.empty()) {
    arms = eval::ReadArms(o.arms);
    for (const eval::MethodArm& a : arms) extra.push_back(a.id);
  }
  eval::EloConfig cfg;
  cfg.cap = o.cap;
  const eval::EloState s = eval::FitElo(ratings, cfg, extra);
  std::map<std::string, std::pair<double, double>> interval;
  if (o.bootstrap > 0) {
    const eval::EloInterval iv = eval::BootstrapElo(ratings, cfg, o.bootstrap, o.level, o.seed);
    for (size_t i = 0; i < iv.arms.size(); ++i) interval[iv.arms[i]] = {iv.lo[i], iv.hi[i]};
  }
  std::map<std::string, const eval::MethodArm*> by_id;
  for (const eval::MethodArm& a : arms) by_id[a.id] = &a;

  int golden = 0;
  for (const eval::RatingRecord& r : ratings) golden += r.golden;
  std::printf("%zu ratings (%d golden), %zu arms, %d group(s), cross-entropy %.6f nats\n",
              ratings.size(), golden, s.arms.size(), s.components, s.cross_entropy);
  for (const std::string& w : s.warnings) std::printf("warning: %s\n", w.c_str());
  std::ofstream csv;
  if (!o.output.empty()) {
    csv.open(o.output);
    if (!csv) throw IoError("cannot write " + o.output);
    csv << "arm_id,method,bpp,elo,count,lo,hi\n";
  }
  std::vector<double> ours, published;
  for (size_t i = 0; i < s.arms.size(); ++i) {
    const std::string& id = s.arms[i];
    const eval::MethodArm* a = by_id.count(id) ? by_id[id] : nullptr;
    std::string line = id;
    if (a) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " (%s @ %.3g bpp)", a->method.c_str(), a->target_bpp);
      line += buf;
    }
    std::printf("%-36s %8.1f  n=%-6d", line.c_str(), s.scores[i], s.counts[i]);
    const auto it = interval.find(id);
    if (it != interval.end()) {
      std::printf("  %.0f%% [%.1f, %.1f]", 100 * o.level, it->second.first, it->second.second);
    }
    if (o.compare_published && a) {
      if (const auto p = eval::MatchPublished(a->method, a->target_bpp)) {
        std::printf("  published %.1f", p->elo);
        ours.push_back(s.scores[i]);
        published.push_back(p->elo);
      }
    }
    std::printf("\n");
    if (csv.is_open()) {
      csv << id << ',' << (a ? a->method : "") << ',';
      if (a) csv << a->target_bpp;
      csv << ',' << s.scores[i] << ',' << s.counts[i] << ',';
      if (it != interval.end()) csv << it->second.first << ',' << it->second.second;
      else csv << ',';
      csv << '\n';
    }
  }
  for (const auto& [rater, g] : s.golden_by_rater) {
    std::printf("rater %s: golden %d, failed %d\n", rater.c_str(), g.total, g.failed);
  }
  if (o.compare_published) {
    const eval::Correlations c = eval::Correlate(ours, published);
    std::printf("published comparison over %zu matched arms: PCC %s, SRCC %s\n", ours.size(),
                Num(c.pcc).c_str(), Num(c.srcc).c_str());
  }
  if (!o.output.empty()) {
    RunManifest man;
    man.command = "elo-fit";
    man.argv = ctx.argv;
    if (o.bootstrap > 0) man.seeds = {{"bootstrap", o.seed}};
    man.inputs = {o.ratings};
    if (!o.arms.empty()) man.inputs.push_back(o.arms);
    man.outputs = {o.output};
    man.Write(o.manifest, o.output);
  }
  return 0;
}

struct PredictivityOptions {
  std::string ratings;
  std::string crop_metrics;
  std::string arm_metrics;
  std::string elo_metric = "elo";
  std::vector<std::string> higher_better;
  bool json = false;
  std::string output;
  std::string manifest;
};

struct MetricLine {
  std::optional<eval::PercentCorrect> pc;
  std::optional<eval::Correlations> corr;
  size_t arms = 0;
};

int RunPredictivity(const PredictivityOptions& o, const Context& ctx) {
  if (o.crop_metrics.empty() && o.arm_metrics.empty()) {
    throw ConfigError("give --crop-metrics, --arm-metrics or both");
  }
  const std::set<std::string> flip(o.higher_better.begin(), o.higher_better.end());
  const std::vector<eval::RatingRecord> ratings =
      o.ratings.empty() ? std::vector<eval::RatingRecord>{} : eval::ReadRatingsJsonl(o.ratings);
  std::map<std::string, MetricLine> lines;

  if (!o.crop_metrics.empty()) {
    if (ratings.empty()) throw ConfigError("--crop-metrics needs --ratings");
    std::vector<eval::CropMetricRow> rows = eval::ReadCropMetricCsv(o.crop_metrics);
    for (eval::CropMetricRow& r : rows) {
      if (flip.count(r.metric_name)) r.value = -r.value;
    }
    for (const auto& [name, table] : eval::MetricTablesByName(rows)) {
      lines[name].pc = eval::ComputePercentCorrect(ratings, table);
    }
  }
  std::string elo_source;
  if (!o.arm_metrics.empty()) {
    const std::vector<eval::MetricRow> rows = eval::ReadMetricCsv(o.arm_metrics);
    std::map<std::string, double> elo;
    for (const eval::MetricRow& r : rows) {
      if (r.metric_name != o.elo_metric) continue;
      if (!elo.emplace(r.arm_id, r.value).second) {
        throw ValueError("duplicate " + o.elo_metric + " row for arm " + r.arm_id);
      }
    }
    if (!elo.empty()) {
      elo_source = "'" + o.elo_metric + "' rows of " + o.arm_metrics;
    } else {
      if (ratings.empty()) {
        throw ConfigError("no '" + o.elo_metric + "' rows in " + o.arm_metrics +
                          "; give --ratings to fit Elo scores");
      }
      const eval::EloState s = eval::FitElo(ratings);
      for (size_t i = 0; i < s.arms.size(); ++i) elo[s.arms[i]] = s.scores[i];
      elo_source = "fitted from " + o.ratings;
    }
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> xy;
    for (const eval::MetricRow& r : rows) {
      if (r.metric_name == o.elo_metric) continue;
      const auto it = elo.find(r.arm_id);
      if (it == elo.end()) continue;
      // Negated so that a good distortion measure correlates positively.
      xy[r.metric_name].first.push_back(flip.count(r.metric_name) ? r.value : -r.value);
      xy[r.metric_name].second.push_back(it->second);
    }
    for (const auto& [name, v] : xy) {
      lines[name].corr = eval::Correlate(v.first, v.second);
      lines[name].arms = v.first.size();
    }
  }

  if (o.json) {
    nlohmann::ordered_json j;
    if (!elo_source.empty()) j["elo_source"] = elo_source;
    for (const auto& [name, l] : lines) {
      nlohmann::ordered_json m;
      if (l.pc) {
        m["percent_correct"] = 100 * l.pc->fraction;
        m["ratings_used"] = l.pc->used;
        m["ties"] = l.pc->ties;
        m["excluded_missing"] = l.pc->excluded_missing;
        m["excluded_golden"] = l.pc->excluded_golden;
      }
      if (l.corr) {
        m["arms"] = l.arms;
        m["pcc"] = l.corr->pcc ? nlohmann::ordered_json(*l.corr->pcc) : nlohmann::ordered_json(nullptr);
        m["srcc"] = l.corr->srcc ? nlohmann::ordered_json(*l.corr->srcc) : nlohmann::ordered_json(nullptr);
      }
      j["metrics"][name] = m;
    }
    std::printf("%s\n", j.dump(2).c_str());
  } else {
    if (!elo_source.empty()) std::printf("Elo scores %s\n", elo_source.c_str());
    std::printf("%-16s %10s %8s %8s %8s %6s\n", "metric", "%correct", "used", "PCC", "SRCC", "arms");
    for (const auto& [name, l] : lines) {
      std::printf("%-16s %10s %8s %8s %8s %6s\n", name.c_str(),
                  l.pc ? Num(100 * l.pc->fraction).c_str() : "-",
                  l.pc ? std::to_string(l.pc->used).c_str() : "-",
                  l.corr ? Num(l.corr->pcc).c_str() : "-", l.corr ? Num(l.corr->srcc).c_str() : "-",
                  l.corr ? std::to_string(l.arms).c_str() : "-");
    }
  }
  if (!o.output.empty()) {
    std::ofstream csv(o.output);
    if (!csv) throw IoError("cannot write " + o.output);
    csv.precision(17);
    csv << "metric,percent_correct,ratings_used,pcc,srcc,arms\n";
    for (const auto& [name, l] : lines) {
      csv << name << ',';
      if (l.pc) csv << 100 * l.pc->fraction << ',' << l.pc->used;
      else csv << ',';
      csv << ',';
      if (l.corr && l.corr->pcc) csv << *l.corr->pcc;
      csv << ',';
      if (l.corr && l.corr->srcc) csv << *l.corr->srcc;
      csv << ',';
      if (l.corr) csv << l.arms;
      csv << '\n';
    }
    RunManifest man;
    man.command = "predictivity";
    man.argv = ctx.argv;
    for (const std::string& in : {o.ratings, o.crop_metrics, o.arm_metrics}) {
      if (!in.empty()) man.inputs.push_back(in);
    }
    man.outputs = {o.output};
    man.Write(o.manifest, o.output);
  }
  return 0;
}

}  // namespace

void AddEvalCommands(CLI::App& app, Context& ctx) {
  auto eo = std::make_shared<EloOptions>();
  CLI::App* el = app.add_subcommand("elo-fit", "Fit Elo scores to pairwise ratings");
  el->add_option("--ratings", eo->ratings, "Ratings (JSON lines)")->required();
  el->add_option("--arms", eo->arms, "Arm descriptions (JSON)");
  el->add_option("--bootstrap", eo->bootstrap, "Bootstrap resamples for intervals")->capture_default_str();
  el->add_option("--level", eo->level, "Interval coverage")->capture_default_str();
  el->add_option("--seed", eo->seed, "Bootstrap seed")->capture_default_str();
  el->add_option("--cap", eo->cap, "Score gap between groups that never lose upward")->capture_default_str();
  el->add_flag("--compare-published", eo->compare_published,
               "Match arms to the published scores by method and rate (needs --arms)");
  el->add_option("-o,--output", eo->output, "Write scores as CSV");
  el->add_option("--manifest", eo->manifest, "Manifest path");
  el->callback([eo, &ctx] { ctx.action = [eo, &ctx] { return RunEloFit(*eo, ctx); }; });

  auto po = std::make_shared<PredictivityOptions>();
  CLI::App* pr = app.add_subcommand("predictivity", "How well metrics predict human ratings");
  pr->add_option("--ratings", po->ratings, "Ratings (JSON lines)");
  pr->add_option("--crop-metrics", po->crop_metrics,
                 "Per-crop metric values: image_id,crop_x,crop_y,arm_id,metric_name,value")
      ;
  pr->add_option("--arm-metrics", po->arm_metrics,
                 "Per-arm averaged metric values: arm_id,bpp,metric_name,value")
      ;
  pr->add_option("--elo-metric", po->elo_metric, "Metric name of Elo rows in --arm-metrics")
      ->capture_default_str();
  pr->add_option("--higher-better", po->higher_better, "Metrics that are similarities, repeatable");
  pr->add_flag("--json", po->json, "Print JSON");
  pr->add_option("-o,--output", po->output, "Write the table as CSV");
  pr->add_option("--manifest", po->manifest, "Manifest path");
  pr->callback([po, &ctx] { ctx.action = [po, &ctx] { return RunPredictivity(*po, ctx); }; });
}

}  // namespace wdc::cli
