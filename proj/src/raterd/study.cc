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

#include "wdc/raterd/study.h"

#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "wdc/error.h"
#include "wdc/eval/pairing.h"
#include "wdc/imgsig/image_io.h"
#include "wdc/imgsig/ops.h"

namespace wdc::raterd {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

constexpr char kLogName[] = "ratings.jsonl";

template <typename T>
T ParseNumber(const std::string& key, const std::string& v) {
  T out{};
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) {
    throw ConfigError("study key '" + key + "': expected integer, got '" + v + "'");
  }
  return out;
}

double ParseReal(const std::string& key, const std::string& v) {
  try {
    size_t used = 0;
    const double d = std::stod(v, &used);
    if (used == v.size()) return d;
  } catch (const std::exception&) {
  }
  throw ConfigError("study key '" + key + "': expected number, got '" + v + "'");
}

std::string Trim(const std::string& s) {
  const size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::string Resolve(const std::string& base, const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute()) return p;
  return (fs::path(base) / p).lexically_normal().string();
}

// First existing <dir>/<id>.png or .ppm.
std::string FindImage(const std::string& dir, const std::string& id) {
  for (const char* ext : {".png", ".ppm"}) {
    const fs::path p = fs::path(dir) / (id + ext);
    if (fs::exists(p)) return p.string();
  }
  return "";
}

std::vector<std::string> ListImages(const std::string& dir) {
  std::vector<std::string> ids;
  std::error_code ec;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    const std::string ext = e.path().extension().string();
    if (e.is_regular_file() && (ext == ".png" || ext == ".ppm")) {
      ids.push_back(e.path().stem().string());
    }
  }
  if (ec) throw ConfigError("cannot list image_dir " + dir + ": " + ec.message());
  std::sort(ids.begin(), ids.end());
  ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
  return ids;
}

int64_t UnixMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

int64_t WallMs() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

std::string Hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Drops a torn final line left by a crash between write and sync.
void RepairLog(const std::string& path) {
  std::error_code ec;
  const auto size = fs::file_size(path, ec);
  if (ec || size == 0) return;
  std::ifstream in(path, std::ios::binary);
  std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (bytes.back() == '\n') return;
  const size_t keep = bytes.rfind('\n') == std::string::npos ? 0 : bytes.rfind('\n') + 1;
  std::fprintf(stderr, "raterd: dropping %zu bytes of a torn record at the end of %s\n",
               bytes.size() - keep, path.c_str());
  fs::resize_file(path, keep);
}

class FileImageStore : public ImageStore {
 public:
  explicit FileImageStore(const StudyConfig& cfg) {
    if (!cfg.data_dir.empty()) cache_dir_ = (fs::path(cfg.data_dir) / "crops").string();
    for (const auto& a : cfg.arms) dirs_[a.id] = a.directory;
    dirs_[eval::kOriginalArm] = cfg.image_dir;
  }

  std::pair<int, int> Size(const std::string& image_id) override {
    {
      std::lock_guard lock(mu_);
      if (auto it = sizes_.find(image_id); it != sizes_.end()) return it->second;
    }
    const imgsig::PixelImage img = Load(image_id, eval::kOriginalArm);
    std::lock_guard lock(mu_);
    return sizes_[image_id] = {img.height(), img.width()};
  }

  std::vector<uint8_t> Crop(const std::string& image_id, const std::string& arm,
                            eval::CropOrigin origin, int width, int height) override {
    uint64_t key = 0x6a09e667f3bcc908ull;
    for (const std::string& s : {image_id, arm}) {
      for (unsigned char c : s) key = imgsig::SplitMix64(key ^ c);
      key = imgsig::SplitMix64(key ^ 0xff);
    }
    for (int v : {origin.x, origin.y, width, height}) {
      key = imgsig::SplitMix64(key ^ static_cast<uint32_t>(v));
    }
    const fs::path cached = cache_dir_.empty() ? fs::path() : fs::path(cache_dir_) / (Hex(key) + ".png");
    if (!cached.empty() && fs::exists(cached)) {
      std::ifstream in(cached, std::ios::binary);
      return std::vector<uint8_t>((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
    }
    const imgsig::PixelImage img = Load(image_id, arm);
    if (origin.x < 0 || origin.y < 0 || origin.x + width > img.width() ||
        origin.y + height > img.height()) {
      throw ValueError("crop outside image " + image_id);
    }
    imgsig::PixelImage crop(img.channels(), height, width);
    for (int c = 0; c < img.channels(); ++c) {
      for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) crop.at(c, y, x) = img.at(c, origin.y + y, origin.x + x);
      }
    }
    std::vector<uint8_t> png = imgsig::EncodePng(crop);
    if (!cached.empty()) {
      std::error_code ec;
      fs::create_directories(cache_dir_, ec);
      const fs::path tmp = cached.string() + ".tmp" + std::to_string(::getpid());
      {
        std::ofstream out(tmp, std::ios::binary);
        out.write(reinterpret_cast<const char*>(png.data()), static_cast<std::streamsize>(png.size()));
      }
      fs::rename(tmp, cached, ec);
    }
    return png;
  }

 private:
  imgsig::PixelImage Load(const std::string& image_id, const std::string& arm) {
    auto d = dirs_.find(arm);
    if (d == dirs_.end()) throw ValueError("unknown arm " + arm);
    const std::string path = FindImage(d->second, image_id);
    if (path.empty()) throw IoError("no image " + image_id + " in " + d->second);
    imgsig::PixelImage img = imgsig::ReadImage(path);
    if (arm != eval::kOriginalArm) {
      const auto [h, w] = Size(image_id);
      if (img.height() != h || img.width() != w) {
        throw FormatError(path + " does not match the size of the original");
      }
    }
    return img;
  }

  std::string cache_dir_;
  std::map<std::string, std::string> dirs_;
  std::mutex mu_;
  std::map<std::string, std::pair<int, int>> sizes_;
};

}  // namespace

void StudyConfig::Validate() const {
  if (crop_width < 1 || crop_height < 1) throw ConfigError("crop size must be positive");
  if (!(golden_rate >= 0 && golden_rate <= 1)) throw ConfigError("golden_rate must be in [0, 1]");
  if (refit_every < 1) throw ConfigError("refit_every must be at least 1");
  if (bootstrap_resamples < 0) throw ConfigError("bootstrap_resamples must be non-negative");
  if (!(bootstrap_level > 0 && bootstrap_level < 1)) {
    throw ConfigError("bootstrap_level must be in (0, 1)");
  }
  if (task_ttl_ms < 1) throw ConfigError("task_ttl_s must be positive");
  if (images.empty()) throw ConfigError("study has no images");
  std::set<std::string> ids;
  for (const auto& a : arms) {
    if (a.id.empty() || a.id == eval::kOriginalArm) throw ConfigError("invalid arm id '" + a.id + "'");
    if (!ids.insert(a.id).second) throw ConfigError("duplicate arm " + a.id);
  }
  ParseListen(listen);
}

StudyConfig StudyConfig::FromText(const std::string& text, const std::string& base_dir) {
  StudyConfig cfg;
  std::istringstream is(text);
  std::string line, images;
  bool images_set = false;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (const size_t hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = Trim(line);
    if (line.empty()) continue;
    const size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("study config line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = Trim(line.substr(0, eq)), v = Trim(line.substr(eq + 1));
    if (key == "arms") {
      try {
        cfg.arms = eval::ReadArms(Resolve(base_dir, v));
      } catch (const Error& e) {
        throw ConfigError(std::string("arms: ") + e.what());
      }
      for (auto& a : cfg.arms) a.directory = Resolve(base_dir, a.directory);
    } else if (key == "images") {
      images = v;
      images_set = true;
    } else if (key == "image_dir") cfg.image_dir = Resolve(base_dir, v);
    else if (key == "crop_width") cfg.crop_width = ParseNumber<int>(key, v);
    else if (key == "crop_height") cfg.crop_height = ParseNumber<int>(key, v);
    else if (key == "golden_rate") cfg.golden_rate = ParseReal(key, v);
    else if (key == "data_dir") cfg.data_dir = Resolve(base_dir, v);
    else if (key == "listen") cfg.listen = v;
    else if (key == "static_dir") cfg.static_dir = Resolve(base_dir, v);
    else if (key == "seed") cfg.seed = ParseNumber<uint64_t>(key, v);
    else if (key == "refit_every") cfg.refit_every = ParseNumber<int>(key, v);
    else if (key == "bootstrap_resamples") cfg.bootstrap_resamples = ParseNumber<int>(key, v);
    else if (key == "bootstrap_level") cfg.bootstrap_level = ParseReal(key, v);
    else if (key == "task_ttl_s") cfg.task_ttl_ms = ParseNumber<int64_t>(key, v) * 1000;
    else throw ConfigError("unknown study key '" + key + "'");
  }
  if (images_set) {
    std::stringstream ss(images);
    std::string id;
    while (std::getline(ss, id, ',')) {
      if (!Trim(id).empty()) cfg.images.push_back(Trim(id));
    }
  } else if (!cfg.image_dir.empty()) {
    cfg.images = ListImages(cfg.image_dir);
  }
  cfg.Validate();
  return cfg;
}

StudyConfig StudyConfig::FromFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open study config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return FromText(ss.str(), fs::path(path).parent_path().string());
}

std::pair<std::string, int> ParseListen(const std::string& listen) {
  const size_t colon = listen.rfind(':');
  if (colon == std::string::npos || colon == 0) {
    throw ConfigError("listen address must be host:port, got '" + listen + "'");
  }
  const int port = ParseNumber<int>("listen", listen.substr(colon + 1));
  if (port < 0 || port > 65535) throw ConfigError("listen port out of range");
  return {listen.substr(0, colon), port};
}

std::unique_ptr<ImageStore> MakeFileImageStore(const StudyConfig& cfg) {
  return std::make_unique<FileImageStore>(cfg);
}

std::string TaskToJson(const TaskPayload& t) {
  return json{{"task_id", t.task_id},
              {"original", "/crop/" + t.original},
              {"side1", "/crop/" + t.side1},
              {"side2", "/crop/" + t.side2},
              {"nonce", t.nonce}}
      .dump();
}

std::string ScoreSnapshot::ToJson(int64_t total_ratings) const {
  json arms_j = json::array();
  for (const ArmScore& a : arms) {
    arms_j.push_back({{"id", a.id},
                      {"method", a.method},
                      {"target_bpp", a.target_bpp},
                      {"elo", a.elo},
                      {"lo", a.lo ? json(*a.lo) : json(nullptr)},
                      {"hi", a.hi ? json(*a.hi) : json(nullptr)},
                      {"count", a.count}});
  }
  json raters_j = json::array();
  for (const RaterAccuracy& r : raters) {
    raters_j.push_back({{"rater_id", r.rater_id},
                        {"golden_total", r.golden_total},
                        {"golden_failed", r.golden_failed},
                        {"accuracy", r.accuracy()}});
  }
  return json{{"ratings", total_ratings},
              {"fitted_ratings", fitted_ratings},
              {"arms", arms_j},
              {"raters", raters_j},
              {"warnings", warnings}}
      .dump();
}

Study::Study(StudyConfig cfg, std::unique_ptr<ImageStore> store, Clock clock)
    : cfg_(std::move(cfg)), store_(std::move(store)), clock_(std::move(clock)) {
  cfg_.Validate();
  if (!clock_) clock_ = UnixMs;
  for (const auto& a : cfg_.arms) arm_ids_.push_back(a.id);
  for (const std::string& id : cfg_.images) {
    const auto [h, w] = store_->Size(id);
    if (cfg_.crop_width > w || cfg_.crop_height > h) {
      throw ConfigError("crop " + std::to_string(cfg_.crop_width) + "x" +
                        std::to_string(cfg_.crop_height) + " does not fit image " + id + " (" +
                        std::to_string(w) + "x" + std::to_string(h) + ")");
    }
    sizes_[id] = {h, w};
  }
  if (!cfg_.data_dir.empty()) {
    std::error_code ec;
    fs::create_directories(cfg_.data_dir, ec);
    if (ec) throw IoError("cannot create data_dir " + cfg_.data_dir + ": " + ec.message());
    const std::string path = (fs::path(cfg_.data_dir) / kLogName).string();
    if (fs::exists(path)) {
      RepairLog(path);
      ratings_ = eval::ReadRatingsJsonl(path);
    }
    log_ = std::fopen(path.c_str(), "ab");
    if (!log_) throw IoError("cannot open rating log " + path);
  }
  for (const auto& r : ratings_) {
    if (r.golden) continue;
    ++live_counts_[r.arm_a];
    ++live_counts_[r.arm_b];
  }
  // The token stream depends on the log length so a restarted service does
  // not reissue ids handed out before the restart.
  std::seed_seq seq{static_cast<uint64_t>(cfg_.seed), static_cast<uint64_t>(cfg_.seed >> 32),
                    static_cast<uint64_t>(ratings_.size())};
  rng_.seed(seq);
  Publish(Fit(ratings_));
}

Study::~Study() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  wake_.notify_all();
  if (worker_.joinable()) worker_.join();
  if (log_) std::fclose(log_);
}

std::string Study::Token(const char* prefix) { return prefix + Hex(rng_()); }

void Study::ExpireLocked(int64_t now) {
  for (auto it = pending_.begin(); it != pending_.end();) {
    if (it->second.expires_ms <= now) {
      for (const std::string* t : {&it->second.original, &it->second.side1, &it->second.side2}) {
        crops_.erase(*t);
      }
      it = pending_.erase(it);
    } else {
      ++it;
    }
  }
}

TaskPayload Study::IssueTask() {
  const std::shared_ptr<const ScoreSnapshot> snap = Scores();
  std::lock_guard lock(mu_);
  const int64_t now = clock_();
  ExpireLocked(now);
  if (arm_ids_.size() < 2) throw ValueError("study needs at least two arms");

  const std::string& image =
      cfg_.images[std::uniform_int_distribution<size_t>(0, cfg_.images.size() - 1)(rng_)];
  const auto [h, w] = sizes_.at(image);
  eval::CropOrigin origin;
  origin.x = std::uniform_int_distribution<int>(0, w - cfg_.crop_width)(rng_);
  origin.y = std::uniform_int_distribution<int>(0, h - cfg_.crop_height)(rng_);

  // Scores come from the last fit; counts are live and include tasks still
  // out with raters, so concurrent raters are spread over pairs.
  std::map<std::string, int> counts = live_counts_;
  for (const auto& [id, p] : pending_) {
    if (p.task.golden || submitted_.count(id)) continue;
    ++counts[p.task.arm_a];
    ++counts[p.task.arm_b];
  }
  std::vector<eval::ArmStat> stats;
  for (const std::string& id : arm_ids_) {
    const int i = snap->state.Index(id);
    stats.push_back({id, i < 0 ? 2000.0 : snap->state.scores[i], counts[id]});
  }
  auto [a, b] = eval::SelectPair(stats);
  if (rng_() >> 63) std::swap(a, b);
  eval::Task task{image, origin, a, b, false};
  task = eval::GoldenMix(task, cfg_.golden_rate, rng_);

  PendingTask p{task, Token("o"), Token("s"), Token("s"), now + cfg_.task_ttl_ms};
  TaskPayload out{"t" + std::to_string(++next_task_) + "-" + Hex(rng_()), p.original, p.side1,
                  p.side2, Hex(rng_())};
  crops_[p.original] = {image, origin, eval::kOriginalArm};
  crops_[p.side1] = {image, origin, task.arm_a};
  crops_[p.side2] = {image, origin, task.arm_b};
  pending_.emplace(out.task_id, std::move(p));
  return out;
}

SubmitStatus Study::Submit(const std::string& task_id, int side, const std::string& rater_id) {
  if (side != 1 && side != 2) return SubmitStatus::kBadSide;
  if (rater_id.empty()) throw ValueError("rater id must not be empty");
  bool fit_inline = false;
  {
    std::lock_guard lock(mu_);
    const int64_t now = clock_();
    ExpireLocked(now);
    if (submitted_.count(task_id)) return SubmitStatus::kDuplicate;
    auto it = pending_.find(task_id);
    if (it == pending_.end()) return SubmitStatus::kUnknownTask;
    const eval::Task& t = it->second.task;
    eval::RatingRecord r;
    r.rater_id = rater_id;
    r.image_id = t.image_id;
    r.crop = t.crop;
    r.arm_a = t.arm_a;
    r.arm_b = t.arm_b;
    r.chosen = side == 1 ? eval::Side::kA : eval::Side::kB;
    r.golden = t.golden;
    r.timestamp_ms = WallMs();
    r.Validate();
    if (log_) {
      const std::string line = eval::RatingToJson(r) + "\n";
      if (std::fwrite(line.data(), 1, line.size(), log_) != line.size() || std::fflush(log_) != 0 ||
          ::fsync(::fileno(log_)) != 0) {
        throw IoError("cannot append to the rating log");
      }
    }
    ratings_.push_back(r);
    submitted_.insert(task_id);
    if (!r.golden) {
      ++live_counts_[r.arm_a];
      ++live_counts_[r.arm_b];
    }
    if (++since_fit_ >= cfg_.refit_every) {
      if (worker_on_) {
        fit_due_ = true;
      } else {
        fit_inline = true;
      }
    }
  }
  if (fit_inline) Refit();
  wake_.notify_one();
  return SubmitStatus::kOk;
}

std::optional<CropRef> Study::ResolveCrop(const std::string& token) {
  std::lock_guard lock(mu_);
  ExpireLocked(clock_());
  auto it = crops_.find(token);
  if (it == crops_.end()) return std::nullopt;
  return it->second;
}

std::vector<uint8_t> Study::CropBytes(const CropRef& ref) {
  return store_->Crop(ref.image_id, ref.arm, ref.origin, cfg_.crop_width, cfg_.crop_height);
}

std::shared_ptr<const ScoreSnapshot> Study::Scores() const {
  std::lock_guard lock(snap_mu_);
  return snapshot_;
}

int64_t Study::RatingCount() const {
  std::lock_guard lock(mu_);
  return static_cast<int64_t>(ratings_.size());
}

void Study::Publish(std::shared_ptr<const ScoreSnapshot> s) {
  std::lock_guard lock(snap_mu_);
  if (!snapshot_ || s->fitted_ratings >= snapshot_->fitted_ratings) snapshot_ = std::move(s);
}

void Study::Refit() {
  std::lock_guard fit_lock(fit_mu_);
  std::vector<eval::RatingRecord> copy;
  {
    std::lock_guard lock(mu_);
    copy = ratings_;
    since_fit_ = 0;
    fit_due_ = false;
  }
  Publish(Fit(copy));
}

std::shared_ptr<const ScoreSnapshot> Study::Fit(
    const std::vector<eval::RatingRecord>& ratings) const {
  auto s = std::make_shared<ScoreSnapshot>();
  s->fitted_ratings = static_cast<int64_t>(ratings.size());
  std::map<std::string, RaterAccuracy> raters;
  int comparisons = 0;
  for (const auto& r : ratings) {
    if (!r.golden) {
      ++comparisons;
      continue;
    }
    RaterAccuracy& acc = raters[r.rater_id];
    acc.rater_id = r.rater_id;
    ++acc.golden_total;
    acc.golden_failed += !r.GoldenPassed();
  }
  for (auto& [id, acc] : raters) s->raters.push_back(acc);

  std::optional<eval::EloInterval> ci;
  if (comparisons > 0) {
    s->state = eval::FitElo(ratings, {}, arm_ids_);
    s->warnings = s->state.warnings;
    if (cfg_.bootstrap_resamples > 0) {
      ci = eval::BootstrapElo(ratings, {}, cfg_.bootstrap_resamples, cfg_.bootstrap_level,
                              cfg_.seed + ratings.size());
    }
  }
  for (const auto& a : cfg_.arms) {
    ArmScore out;
    out.id = a.id;
    out.method = a.method;
    out.target_bpp = a.target_bpp;
    if (const int i = s->state.Index(a.id); i >= 0) {
      out.elo = s->state.scores[i];
      out.count = s->state.counts[i];
    }
    if (ci) {
      const auto it = std::find(ci->arms.begin(), ci->arms.end(), a.id);
      if (it != ci->arms.end()) {
        out.lo = ci->lo[it - ci->arms.begin()];
        out.hi = ci->hi[it - ci->arms.begin()];
      }
    }
    s->arms.push_back(out);
  }
  return s;
}

void Study::StartRefitWorker() {
  std::lock_guard lock(mu_);
  if (worker_on_) return;
  worker_on_ = true;
  worker_ = std::thread([this] { WorkerLoop(); });
}

void Study::WorkerLoop() {
  for (;;) {
    {
      std::unique_lock lock(mu_);
      wake_.wait(lock, [this] { return stop_ || fit_due_; });
      if (stop_) return;
    }
    try {
      Refit();
    } catch (const std::exception& e) {
      std::fprintf(stderr, "raterd: refit failed: %s\n", e.what());
    }
  }
}

}  // namespace wdc::raterd
