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

#include "wdc/eval/stats.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "wdc/error.h"

namespace wdc::eval {
namespace {

void CheckLengths(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValueError("correlation inputs differ in length");
  if (x.size() < 3) throw ValueError("correlation needs at least 3 pairs");
}

}  // namespace

std::vector<double> AverageRanks(std::span<const double> x) {
  std::vector<size_t> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](size_t a, size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  for (size_t i = 0; i < order.size();) {
    size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double r = 0.5 * static_cast<double>(i + j) + 1.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = r;
    i = j + 1;
  }
  return ranks;
}

std::optional<double> Pearson(std::span<const double> x, std::span<const double> y) {
  CheckLengths(x, y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx == 0 || syy == 0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

std::optional<double> Spearman(std::span<const double> x, std::span<const double> y) {
  CheckLengths(x, y);
  const std::vector<double> rx = AverageRanks(x), ry = AverageRanks(y);
  return Pearson(rx, ry);
}

Correlations Correlate(std::span<const double> x, std::span<const double> y) {
  return {Pearson(x, y), Spearman(x, y)};
}

PercentCorrect ComputePercentCorrect(const std::vector<RatingRecord>& ratings,
                                     const MetricTable& metric) {
  PercentCorrect pc;
  double correct = 0;
  for (const RatingRecord& r : ratings) {
    if (r.golden) {
      ++pc.excluded_golden;
      continue;
    }
    const auto chosen = metric.find({r.image_id, r.crop, r.chosen_arm()});
    const auto other = metric.find({r.image_id, r.crop, r.other_arm()});
    if (chosen == metric.end() || other == metric.end()) {
      ++pc.excluded_missing;
      continue;
    }
    ++pc.used;
    if (chosen->second < other->second) {
      correct += 1;
    } else if (chosen->second == other->second) {
      correct += 0.5;
      ++pc.ties;
    }
  }
  if (pc.used == 0) throw ValueError("no rating has metric values for both sides");
  pc.fraction = correct / pc.used;
  return pc;
}

std::map<std::string, MetricTable> MetricTablesByName(const std::vector<CropMetricRow>& rows) {
  std::map<std::string, MetricTable> out;
  for (const CropMetricRow& r : rows) {
    if (!out[r.metric_name].emplace(MetricKey{r.image_id, r.crop, r.arm_id}, r.value).second) {
      throw ValueError("duplicate " + r.metric_name + " value for " + r.arm_id + " on " +
                       r.image_id);
    }
  }
  return out;
}

}  // namespace wdc::eval
