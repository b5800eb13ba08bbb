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

#include "wdc/eval/records.h"

#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "json.hpp"
#include "wdc/error.h"

namespace wdc::eval {
namespace {

using nlohmann::json;

template <typename T>
T Field(const json& j, const char* key) {
  if (!j.contains(key)) throw FormatError(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw FormatError(std::string("bad type for field \"") + key + "\"");
  }
}

std::ifstream OpenIn(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path);
  return in;
}

std::ofstream OpenOut(const std::string& path) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path);
  return out;
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

double ParseDouble(const std::string& s, const std::string& what) {
  try {
    size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw FormatError("bad number \"" + s + "\" in " + what);
  }
}

}  // namespace

void RatingRecord::Validate() const {
  if (rater_id.empty() || image_id.empty() || arm_a.empty() || arm_b.empty()) {
    throw ValueError("rating has an empty id");
  }
  if (arm_a == arm_b) throw ValueError("rating compares arm " + arm_a + " with itself");
  const int originals = (arm_a == kOriginalArm) + (arm_b == kOriginalArm);
  if (golden && originals != 1) throw ValueError("golden rating needs exactly one original side");
  if (!golden && originals != 0) throw ValueError("non-golden rating shows the original");
}

std::string RatingToJson(const RatingRecord& r) {
  json j = {{"rater_id", r.rater_id}, {"image_id", r.image_id}, {"crop_x", r.crop.x},
            {"crop_y", r.crop.y},     {"arm_a", r.arm_a},       {"arm_b", r.arm_b},
            {"chosen", r.chosen == Side::kA ? "A" : "B"},       {"golden", r.golden},
            {"timestamp", r.timestamp_ms}};
  return j.dump();
}

RatingRecord RatingFromJson(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("invalid JSON: ") + e.what());
  }
  if (!j.is_object()) throw FormatError("rating is not a JSON object");
  RatingRecord r;
  r.rater_id = Field<std::string>(j, "rater_id");
  r.image_id = Field<std::string>(j, "image_id");
  r.crop.x = Field<int>(j, "crop_x");
  r.crop.y = Field<int>(j, "crop_y");
  r.arm_a = Field<std::string>(j, "arm_a");
  r.arm_b = Field<std::string>(j, "arm_b");
  const std::string chosen = Field<std::string>(j, "chosen");
  if (chosen != "A" && chosen != "B") throw FormatError("chosen must be \"A\" or \"B\"");
  r.chosen = chosen == "A" ? Side::kA : Side::kB;
  r.golden = Field<bool>(j, "golden");
  r.timestamp_ms = Field<int64_t>(j, "timestamp");
  return r;
}

std::vector<RatingRecord> ReadRatingsJsonl(const std::string& path) {
  std::ifstream in = OpenIn(path);
  std::vector<RatingRecord> out;
  std::string line;
  for (int n = 1; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      out.push_back(RatingFromJson(line));
    } catch (const FormatError& e) {
      throw FormatError(path + ":" + std::to_string(n) + ": " + e.what());
    }
  }
  return out;
}

void WriteRatingsJsonl(const std::string& path, const std::vector<RatingRecord>& records) {
  std::ofstream out = OpenOut(path);
  for (const RatingRecord& r : records) out << RatingToJson(r) << "\n";
  if (!out) throw IoError("write failed: " + path);
}

std::vector<MethodArm> ReadArms(const std::string& path) {
  std::ifstream in = OpenIn(path);
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw FormatError(path + ": " + e.what());
  }
  if (!j.is_array()) throw FormatError(path + ": expected a JSON array of arms");
  std::vector<MethodArm> arms;
  std::set<std::string> seen;
  for (const json& a : j) {
    MethodArm m;
    m.id = Field<std::string>(a, "id");
    m.method = Field<std::string>(a, "method");
    m.target_bpp = Field<double>(a, "target_bpp");
    m.directory = a.value("directory", "");
    if (m.id.empty() || m.id == kOriginalArm) throw ValueError("invalid arm id \"" + m.id + "\"");
    if (!seen.insert(m.id).second) throw ValueError("duplicate arm id " + m.id);
    arms.push_back(std::move(m));
  }
  return arms;
}

void WriteArms(const std::string& path, const std::vector<MethodArm>& arms) {
  json j = json::array();
  for (const MethodArm& a : arms) {
    j.push_back({{"id", a.id}, {"method", a.method}, {"target_bpp", a.target_bpp},
                 {"directory", a.directory}});
  }
  std::ofstream out = OpenOut(path);
  out << j.dump(2) << "\n";
}

std::vector<std::string> SplitCsvLine(std::string_view line) {
  std::vector<std::string> fields(1);
  bool quoted = false;
  for (size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        fields.back() += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        fields.back() += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.emplace_back();
    } else if (c != '\r') {
      fields.back() += c;
    }
  }
  if (quoted) throw FormatError("unterminated quote in CSV line");
  return fields;
}

void WriteMetricCsv(const std::string& path, const std::vector<MetricRow>& rows) {
  std::ofstream out = OpenOut(path);
  out << "arm_id,bpp,metric_name,value\n" << std::setprecision(17);
  for (const MetricRow& r : rows) {
    out << CsvField(r.arm_id) << "," << r.bpp << "," << CsvField(r.metric_name) << "," << r.value
        << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<MetricRow> ReadMetricCsv(const std::string& path) {
  std::ifstream in = OpenIn(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  const std::vector<std::string> header = SplitCsvLine(line);
  if (header != std::vector<std::string>{"arm_id", "bpp", "metric_name", "value"}) {
    throw FormatError(path + ": expected header arm_id,bpp,metric_name,value");
  }
  std::vector<MetricRow> rows;
  for (int n = 2; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(n);
    const std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != 4) throw FormatError(where + ": expected 4 fields");
    rows.push_back({f[0], ParseDouble(f[1], where), f[2], ParseDouble(f[3], where)});
  }
  return rows;
}

void WriteCropMetricCsv(const std::string& path, const std::vector<CropMetricRow>& rows) {
  std::ofstream out = OpenOut(path);
  out << "image_id,crop_x,crop_y,arm_id,metric_name,value\n" << std::setprecision(17);
  for (const CropMetricRow& r : rows) {
    out << CsvField(r.image_id) << "," << r.crop.x << "," << r.crop.y << "," << CsvField(r.arm_id)
        << "," << CsvField(r.metric_name) << "," << r.value << "\n";
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<CropMetricRow> ReadCropMetricCsv(const std::string& path) {
  std::ifstream in = OpenIn(path);
  std::string line;
  if (!std::getline(in, line)) throw FormatError(path + ": empty file");
  if (SplitCsvLine(line) !=
      std::vector<std::string>{"image_id", "crop_x", "crop_y", "arm_id", "metric_name", "value"}) {
    throw FormatError(path + ": expected header image_id,crop_x,crop_y,arm_id,metric_name,value");
  }
  std::vector<CropMetricRow> rows;
  for (int n = 2; std::getline(in, line); ++n) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const std::string where = path + ":" + std::to_string(n);
    const std::vector<std::string> f = SplitCsvLine(line);
    if (f.size() != 6) throw FormatError(where + ": expected 6 fields");
    const double x = ParseDouble(f[1], where), y = ParseDouble(f[2], where);
    if (x != static_cast<int>(x) || y != static_cast<int>(y)) {
      throw FormatError(where + ": crop coordinates must be integers");
    }
    rows.push_back({f[0], {static_cast<int>(x), static_cast<int>(y)}, f[3], f[4],
                    ParseDouble(f[5], where)});
  }
  return rows;
}

}  // namespace wdc::eval
