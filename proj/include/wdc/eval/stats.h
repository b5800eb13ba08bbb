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

// Predictivity statistics: correlations between per-arm metric values and
// Elo scores, and the fraction of individual ratings a metric predicts.

#ifndef WDC_EVAL_STATS_H_
#define WDC_EVAL_STATS_H_

#include <compare>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wdc/eval/records.h"

namespace wdc::eval {

// 1-based ranks; tied values share the average of their ranks.
std::vector<double> AverageRanks(std::span<const double> x);

// Empty when either input has zero variance. Throws ValueError when the
// lengths differ or are below 3.
std::optional<double> Pearson(std::span<const double> x, std::span<const double> y);
std::optional<double> Spearman(std::span<const double> x, std::span<const double> y);

struct Correlations {
  std::optional<double> pcc;
  std::optional<double> srcc;
};
Correlations Correlate(std::span<const double> x, std::span<const double> y);

// Metric value of one arm's reconstruction on one crop.
struct MetricKey {
  std::string image_id;
  CropOrigin crop;
  std::string arm;
  auto operator<=>(const MetricKey&) const = default;
};
// Lower values mean closer to the original (a distortion). Negate
// similarity scores before use.
using MetricTable = std::map<MetricKey, double>;

// One table per metric name.
std::map<std::string, MetricTable> MetricTablesByName(const std::vector<CropMetricRow>& rows);

struct PercentCorrect {
  double fraction = 0.0;   // correct plus half the ties, over `used`
  int used = 0;
  int ties = 0;
  int excluded_missing = 0;
  int excluded_golden = 0;
};

// Fraction of non-golden ratings whose chosen side has the lower metric
// value. Ratings lacking a metric value for either side are excluded and
// counted. Throws ValueError when no rating is usable.
PercentCorrect ComputePercentCorrect(const std::vector<RatingRecord>& ratings,
                                     const MetricTable& metric);

}  // namespace wdc::eval

#endif  // WDC_EVAL_STATS_H_
