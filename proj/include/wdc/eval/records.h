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

// Rating records, method arms and metric tables, with their on-disk forms:
// ratings as line-delimited JSON, metric tables as CSV.

#ifndef WDC_EVAL_RECORDS_H_
#define WDC_EVAL_RECORDS_H_

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace wdc::eval {

// Arm id that stands for the unmodified original in golden questions.
inline constexpr char kOriginalArm[] = "original";

enum class Side { kA, kB };

struct CropOrigin {
  int x = 0;
  int y = 0;
  auto operator<=>(const CropOrigin&) const = default;
};

// One binary judgement: which of two reconstructions looks more like the
// original crop.
struct RatingRecord {
  std::string rater_id;
  std::string image_id;
  CropOrigin crop;
  std::string arm_a;
  std::string arm_b;
  Side chosen = Side::kA;
  bool golden = false;  // one side is the original
  int64_t timestamp_ms = 0;

  const std::string& chosen_arm() const { return chosen == Side::kA ? arm_a : arm_b; }
  const std::string& other_arm() const { return chosen == Side::kA ? arm_b : arm_a; }
  // A golden question is passed when the original is chosen.
  bool GoldenPassed() const { return golden && chosen_arm() == kOriginalArm; }
  // Throws ValueError: empty ids, A == B, or a golden flag that does not
  // match exactly one original side.
  void Validate() const;
};

// {"rater_id", "image_id", "crop_x", "crop_y", "arm_a", "arm_b",
//  "chosen": "A"|"B", "golden", "timestamp"} on one line.
std::string RatingToJson(const RatingRecord& r);
// Throws FormatError on malformed JSON or missing fields.
RatingRecord RatingFromJson(std::string_view line);

// Reads every record; blank lines are skipped. Throws IoError or
// FormatError naming the line.
std::vector<RatingRecord> ReadRatingsJsonl(const std::string& path);
void WriteRatingsJsonl(const std::string& path, const std::vector<RatingRecord>& records);

// A compression method at one target rate.
struct MethodArm {
  std::string id;
  std::string method;
  double target_bpp = 0.0;
  std::string directory;  // reconstructions, one file per image id
};

// JSON array of {"id", "method", "target_bpp", "directory"}. Throws
// FormatError, or ValueError on duplicate ids.
std::vector<MethodArm> ReadArms(const std::string& path);
void WriteArms(const std::string& path, const std::vector<MethodArm>& arms);

// One row of a metric or score table.
struct MetricRow {
  std::string arm_id;
  double bpp = 0.0;
  std::string metric_name;
  double value = 0.0;
};

// CSV with header "arm_id,bpp,metric_name,value". Fields holding commas or
// quotes are quoted. Doubles are written with round-trip precision.
void WriteMetricCsv(const std::string& path, const std::vector<MetricRow>& rows);
std::vector<MetricRow> ReadMetricCsv(const std::string& path);

// Metric value of one arm's reconstruction on one crop.
struct CropMetricRow {
  std::string image_id;
  CropOrigin crop;
  std::string arm_id;
  std::string metric_name;
  double value = 0.0;
};

// CSV with header "image_id,crop_x,crop_y,arm_id,metric_name,value".
void WriteCropMetricCsv(const std::string& path, const std::vector<CropMetricRow>& rows);
std::vector<CropMetricRow> ReadCropMetricCsv(const std::string& path);

// Splits one CSV line, honouring double-quoted fields.
std::vector<std::string> SplitCsvLine(std::string_view line);

}  // namespace wdc::eval

#endif  // WDC_EVAL_RECORDS_H_
