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

// Rating-study state: task issue with adaptive pairing and golden questions,
// durable rating log, and periodically refitted Elo scores.

#ifndef WDC_RATERD_STUDY_H_
#define WDC_RATERD_STUDY_H_

#include <condition_variable>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "wdc/eval/elo.h"
#include "wdc/eval/pairing.h"
#include "wdc/eval/records.h"

namespace wdc::raterd {

struct StudyConfig {
  std::vector<eval::MethodArm> arms;
  std::vector<std::string> images;  // image ids
  std::string image_dir;            // originals, <id>.png or <id>.ppm
  int crop_width = 512;
  int crop_height = 432;
  double golden_rate = 0.10;
  std::string data_dir;  // rating log and crop cache
  std::string listen = "127.0.0.1:8080";
  std::string static_dir;  // rater UI bundle, optional
  uint64_t seed = 1;
  int refit_every = 50;
  int bootstrap_resamples = 1000;
  double bootstrap_level = 0.99;
  int64_t task_ttl_ms = 10 * 60 * 1000;

  // Throws ConfigError.
  void Validate() const;

  // key=value lines; '#' starts a comment. Keys: arms (path to the arms
  // JSON), images (comma-separated ids; default: every image in image_dir),
  // image_dir, crop_width, crop_height, golden_rate, data_dir, listen,
  // static_dir, seed, refit_every, bootstrap_resamples, bootstrap_level,
  // task_ttl_s. Relative paths resolve against `base_dir`. Throws ConfigError.
  static StudyConfig FromText(const std::string& text, const std::string& base_dir = ".");
  static StudyConfig FromFile(const std::string& path);
};

// Environment variable that overrides StudyConfig::listen.
inline constexpr char kListenEnv[] = "WDC_RATERD_LISTEN";

// Splits "host:port". Throws ConfigError.
std::pair<std::string, int> ParseListen(const std::string& listen);

// Source of image sizes and crop bytes. Implementations must be thread-safe.
class ImageStore {
 public:
  virtual ~ImageStore() = default;
  // (height, width) of the original. Throws ValueError for unknown ids.
  virtual std::pair<int, int> Size(const std::string& image_id) = 0;
  // PNG bytes of the crop of `arm` (or the original) at `origin`.
  virtual std::vector<uint8_t> Crop(const std::string& image_id, const std::string& arm,
                                    eval::CropOrigin origin, int width, int height) = 0;
};

// Originals in image_dir, reconstructions in each arm's directory under the
// same id. Crops are cached on disk under data_dir/crops.
std::unique_ptr<ImageStore> MakeFileImageStore(const StudyConfig& cfg);

// What the client sees. Crop references are opaque tokens; which arm sits
// behind a token is known only to the server.
struct TaskPayload {
  std::string task_id;
  std::string original;
  std::string side1;
  std::string side2;
  std::string nonce;
};

// {"task_id", "original", "side1", "side2", "nonce"}; crop tokens become
// "/crop/<token>" URLs.
std::string TaskToJson(const TaskPayload& t);

struct CropRef {
  std::string image_id;
  eval::CropOrigin origin;
  std::string arm;
};

struct ArmScore {
  std::string id;
  std::string method;
  double target_bpp = 0.0;
  double elo = 2000.0;
  std::optional<double> lo, hi;
  int count = 0;
};

struct RaterAccuracy {
  std::string rater_id;
  int golden_total = 0;
  int golden_failed = 0;
  double accuracy() const {
    return golden_total == 0 ? 0.0 : 1.0 - static_cast<double>(golden_failed) / golden_total;
  }
};

// Immutable result of one refit.
struct ScoreSnapshot {
  int64_t fitted_ratings = 0;  // ratings in the log when the fit was taken
  std::vector<ArmScore> arms;
  std::vector<RaterAccuracy> raters;
  std::vector<std::string> warnings;
  eval::EloState state;

  std::string ToJson(int64_t total_ratings) const;
};

enum class SubmitStatus {
  kOk,
  kUnknownTask,  // never issued, expired or lost in a restart
  kDuplicate,
  kBadSide,
};

class Study {
 public:
  using Clock = std::function<int64_t()>;  // milliseconds

  // Replays the rating log in data_dir. Throws ConfigError when a crop does
  // not fit an image, IoError / FormatError for an unreadable log.
  Study(StudyConfig cfg, std::unique_ptr<ImageStore> store, Clock clock = {});
  ~Study();
  Study(const Study&) = delete;
  Study& operator=(const Study&) = delete;

  const StudyConfig& config() const { return cfg_; }

  // Throws ValueError when fewer than two arms are configured.
  TaskPayload IssueTask();

  // `side` is 1 or 2. The record is on disk before kOk is returned.
  SubmitStatus Submit(const std::string& task_id, int side, const std::string& rater_id);

  std::optional<CropRef> ResolveCrop(const std::string& token);
  std::vector<uint8_t> CropBytes(const CropRef& ref);

  std::shared_ptr<const ScoreSnapshot> Scores() const;
  int64_t RatingCount() const;

  // Refits synchronously from the current log.
  void Refit();
  // Starts a background thread that refits after every `refit_every` new
  // ratings. Without it, refits happen inline in Submit.
  void StartRefitWorker();

 private:
  struct PendingTask {
    eval::Task task;
    std::string original, side1, side2;
    int64_t expires_ms;
  };

  void ExpireLocked(int64_t now);
  std::string Token(const char* prefix);
  std::shared_ptr<const ScoreSnapshot> Fit(const std::vector<eval::RatingRecord>& ratings) const;
  void Publish(std::shared_ptr<const ScoreSnapshot> s);
  void WorkerLoop();

  StudyConfig cfg_;
  std::unique_ptr<ImageStore> store_;
  Clock clock_;
  std::vector<std::string> arm_ids_;
  std::map<std::string, std::pair<int, int>> sizes_;

  mutable std::mutex mu_;  // the single writer lock
  std::mt19937_64 rng_;
  uint64_t next_task_ = 0;
  std::map<std::string, PendingTask> pending_;
  std::set<std::string> submitted_;
  std::map<std::string, CropRef> crops_;
  std::map<std::string, int> live_counts_;
  std::vector<eval::RatingRecord> ratings_;
  int64_t since_fit_ = 0;
  std::FILE* log_ = nullptr;

  mutable std::mutex snap_mu_;
  std::shared_ptr<const ScoreSnapshot> snapshot_;

  std::mutex fit_mu_;  // one refit at a time
  std::condition_variable wake_;
  bool worker_on_ = false;
  bool stop_ = false;
  bool fit_due_ = false;
  std::thread worker_;
};

}  // namespace wdc::raterd

#endif  // WDC_RATERD_STUDY_H_
