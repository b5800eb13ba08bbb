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

#include "wdc/wdmetric/wasserstein.h"

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>

#include "wdc/error.h"
#include "wdc/wdmetric/moments.h"

namespace wdc::wd {
namespace {

std::string Num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double MeanOf(const imgsig::Plane& p) {
  double s = 0.0;
  for (double v : p.values()) s += v;
  return s / static_cast<double>(p.values().size());
}

struct Job {
  const features::FeatureMap* a;
  const features::FeatureMap* b;
  int channel;
};

}  // namespace

std::string WDReport::Serialize() const {
  std::ostringstream os;
  os << "total=" << Num(total) << "\n";
  os << "scales=" << top_scale << "\n";
  os << "sigma=" << sigma_source << "\n";
  os << "backend=" << backend << "\n";
  os << "features=" << per_feature.size() << "\n";
  for (size_t a = 0; a < per_scale.size(); ++a) os << "scale." << a << "=" << Num(per_scale[a]) << "\n";
  for (size_t i = 0; i < per_feature.size(); ++i) {
    os << "feature." << feature_ids[i] << "=" << Num(per_feature[i]) << "\n";
  }
  return os.str();
}

WDReport WDReport::Parse(const std::string& text) {
  WDReport r;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  try {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty()) continue;
      const size_t eq = line.find('=');
      if (eq == std::string::npos) throw FormatError("missing '='");
      const std::string key = line.substr(0, eq);
      const std::string value = line.substr(eq + 1);
      if (key == "total") {
        r.total = std::stod(value);
      } else if (key == "scales") {
        r.top_scale = std::stoi(value);
      } else if (key == "sigma") {
        r.sigma_source = value;
      } else if (key == "backend") {
        r.backend = value;
      } else if (key == "features") {
        // Implied by the feature lines.
      } else if (key.rfind("scale.", 0) == 0) {
        const size_t a = std::stoul(key.substr(6));
        if (a != r.per_scale.size()) throw FormatError("scale entries out of order");
        r.per_scale.push_back(std::stod(value));
      } else if (key.rfind("feature.", 0) == 0) {
        r.feature_ids.push_back(key.substr(8));
        r.per_feature.push_back(std::stod(value));
      } else {
        throw FormatError("unknown key '" + key + "'");
      }
    }
  } catch (const std::logic_error& e) {
    throw FormatError("WD report line " + std::to_string(line_no) + ": bad number");
  } catch (const FormatError& e) {
    throw FormatError("WD report line " + std::to_string(line_no) + ": " + e.what());
  }
  return r;
}

WDReport WassersteinDistortion(const features::FeatureSet& fa, const features::FeatureSet& fb,
                               const SigmaMap& sigma, int top) {
  if (top < 0) throw ValueError("scale count must be >= 0");
  ValidateSigma(sigma);
  if (fa.maps.size() != fb.maps.size()) throw ShapeError("feature sets differ in size");
  std::vector<Job> jobs;
  WDReport report;
  report.top_scale = top;
  for (size_t m = 0; m < fa.maps.size(); ++m) {
    const auto& ma = fa.maps[m];
    const auto& mb = fb.maps[m];
    if (!ma.tensor.SameShape(mb.tensor) || ma.r != mb.r) {
      throw ShapeError("feature map '" + ma.id + "' differs between images");
    }
    for (int c = 0; c < ma.tensor.channels(); ++c) {
      jobs.push_back({&ma, &mb, c});
      report.feature_ids.push_back(ma.id + "[" + std::to_string(c) + "]");
    }
  }
  // Weights depend only on the map, so cache them per (map, level).
  std::map<std::pair<const features::FeatureMap*, int>, imgsig::Plane> weights;
  for (const auto& m : fa.maps) {
    int h = m.tensor.height(), w = m.tensor.width();
    for (int a = 0; a <= top; ++a) {
      weights[{&m, a}] = WeightMap(AdaptSigma(sigma, m.r, h, w), a, top);
      h = (h + 1) / 2;
      w = (w + 1) / 2;
    }
  }
  std::vector<std::vector<double>> terms(jobs.size(), std::vector<double>(top + 1, 0.0));
#pragma omp parallel for schedule(dynamic)
  for (size_t j = 0; j < jobs.size(); ++j) {
    const Job& job = jobs[j];
    MomentPyramid pa = BuildMomentPyramid(job.a->tensor.plane(job.channel), top);
    MomentPyramid pb = BuildMomentPyramid(job.b->tensor.plane(job.channel), top);
    for (int a = 0; a <= top; ++a) {
      const imgsig::Plane& w = weights.at({job.a, a});
      imgsig::Plane d = LocalWdMap(pa, pb, a);
      auto dv = d.values();
      auto wv = w.values();
      for (size_t i = 0; i < dv.size(); ++i) dv[i] *= wv[i];
      terms[j][a] = MeanOf(d);
    }
  }
  report.per_scale.assign(top + 1, 0.0);
  for (size_t j = 0; j < jobs.size(); ++j) {
    double d = 0.0;
    for (int a = 0; a <= top; ++a) {
      d += terms[j][a];
      report.per_scale[a] += terms[j][a];
    }
    report.per_feature.push_back(d);
    report.total += d;
  }
  return report;
}

WDReport WassersteinDistortion(const imgsig::PixelImage& a, const imgsig::PixelImage& b,
                               const SigmaMap& sigma, const features::FeatureExtractor& fx, int top,
                               const std::string& sigma_source) {
  if (!a.SameShape(b)) throw ShapeError("WD needs images of equal size");
  if (sigma.height() != a.height() || sigma.width() != a.width()) {
    throw ShapeError("sigma map is " + std::to_string(sigma.height()) + "x" +
                     std::to_string(sigma.width()) + ", images are " + std::to_string(a.height()) +
                     "x" + std::to_string(a.width()));
  }
  WDReport r = WassersteinDistortion(fx.Extract(a), fx.Extract(b), sigma, top);
  r.sigma_source = sigma_source;
  r.backend = fx.spec().Describe();
  return r;
}

MsePsnr ComputeMsePsnr(const imgsig::PixelImage& a, const imgsig::PixelImage& b) {
  if (!a.SameShape(b)) throw ShapeError("MSE needs images of equal size");
  double s = 0.0;
  auto av = a.values(), bv = b.values();
  for (size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    s += d * d;
  }
  MsePsnr out;
  out.mse = s / static_cast<double>(av.size());
  out.psnr = out.mse > 0 ? -10.0 * std::log10(out.mse) : std::numeric_limits<double>::infinity();
  return out;
}

}  // namespace wdc::wd
