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

#include "support/wd_oracle.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <tuple>

namespace wdc::testing {
namespace {

int Mirror(int i, int n) {
  if (n == 1) return 0;
  const int p = 2 * (n - 1);
  i = ((i % p) + p) % p;
  return i < n ? i : p - i;
}

DenseOperator SingleLevel(int h, int w) {
  DenseOperator op;
  op.out_h = (h + 1) / 2;
  op.out_w = (w + 1) / 2;
  op.rows = op.out_h * op.out_w;
  op.cols = h * w;
  op.m.assign(static_cast<size_t>(op.rows) * op.cols, 0.0);
  const double b[3] = {0.25, 0.5, 0.25};
  for (int y = 0; y < op.out_h; ++y) {
    for (int x = 0; x < op.out_w; ++x) {
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
          const int sy = Mirror(2 * y + i - 1, h);
          const int sx = Mirror(2 * x + j - 1, w);
          op.m[static_cast<size_t>(y * op.out_w + x) * op.cols + sy * w + sx] += b[i] * b[j];
        }
      }
    }
  }
  return op;
}

DenseOperator Identity(int h, int w) {
  DenseOperator op;
  op.out_h = h;
  op.out_w = w;
  op.rows = op.cols = h * w;
  op.m.assign(static_cast<size_t>(op.rows) * op.cols, 0.0);
  for (int i = 0; i < op.rows; ++i) op.m[static_cast<size_t>(i) * op.cols + i] = 1.0;
  return op;
}

DenseOperator Compose(const DenseOperator& outer, const DenseOperator& inner) {
  DenseOperator op;
  op.out_h = outer.out_h;
  op.out_w = outer.out_w;
  op.rows = outer.rows;
  op.cols = inner.cols;
  op.m.assign(static_cast<size_t>(op.rows) * op.cols, 0.0);
  for (int r = 0; r < outer.rows; ++r) {
    for (int k = 0; k < outer.cols; ++k) {
      const double a = outer.m[static_cast<size_t>(r) * outer.cols + k];
      if (a == 0.0) continue;
      const double* src = &inner.m[static_cast<size_t>(k) * inner.cols];
      double* dst = &op.m[static_cast<size_t>(r) * op.cols];
      for (int c = 0; c < inner.cols; ++c) dst[c] += a * src[c];
    }
  }
  return op;
}

}  // namespace

std::vector<double> DenseOperator::Apply(const std::vector<double>& x) const {
  std::vector<double> y(rows, 0.0);
  for (int r = 0; r < rows; ++r) {
    const double* row = &m[static_cast<size_t>(r) * cols];
    double acc = 0.0;
    for (int c = 0; c < cols; ++c) acc += row[c] * x[c];
    y[r] = acc;
  }
  return y;
}

const DenseOperator& ComposedDownsample(int h, int w, int alpha) {
  static std::map<std::tuple<int, int, int>, DenseOperator> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(h, w, alpha);
  if (auto it = cache.find(key); it != cache.end()) return it->second;
  DenseOperator op = Identity(h, w);
  for (int a = 0; a < alpha; ++a) op = Compose(SingleLevel(op.out_h, op.out_w), op);
  return cache.emplace(key, std::move(op)).first->second;
}

OracleMoments LocalMoments(const imgsig::Plane& f, int alpha) {
  std::vector<double> x(f.values().begin(), f.values().end());
  std::vector<double> x2(x.size());
  for (size_t i = 0; i < x.size(); ++i) x2[i] = x[i] * x[i];
  const DenseOperator& op = ComposedDownsample(f.height(), f.width(), alpha);
  OracleMoments m;
  m.mu = op.Apply(x);
  std::vector<double> rho = op.Apply(x2);
  m.nu.resize(rho.size());
  for (size_t i = 0; i < rho.size(); ++i) m.nu[i] = std::sqrt(std::max(rho[i] - m.mu[i] * m.mu[i], 0.0));
  if (alpha == 0) std::fill(m.nu.begin(), m.nu.end(), 0.0);
  return m;
}

double OracleWeight(double s, int alpha, int top) {
  const double l = std::log2(s);
  if (alpha == top && l > top) return 1.0;
  return std::max(0.0, 1.0 - std::abs(l - alpha));
}

OracleWd BruteForceWd(const features::FeatureSet& a, const features::FeatureSet& b, double sigma,
                      int top) {
  OracleWd out;
  for (size_t k = 0; k < a.maps.size(); ++k) {
    const auto& ma = a.maps[k];
    const auto& mb = b.maps[k];
    const double s = std::max(ma.r * sigma, 1.0);
    for (int c = 0; c < ma.tensor.channels(); ++c) {
      double d_i = 0.0;
      for (int alpha = 0; alpha <= top; ++alpha) {
        const double w = OracleWeight(s, alpha, top);
        if (w == 0.0) continue;
        OracleMoments pa = LocalMoments(ma.tensor.plane(c), alpha);
        OracleMoments pb = LocalMoments(mb.tensor.plane(c), alpha);
        double acc = 0.0;
        for (size_t i = 0; i < pa.mu.size(); ++i) {
          acc += std::hypot(pa.mu[i] - pb.mu[i], pa.nu[i] - pb.nu[i]);
        }
        d_i += w * acc / static_cast<double>(pa.mu.size());
      }
      out.per_feature.push_back(d_i);
      out.total += d_i;
    }
  }
  return out;
}

std::vector<double> PointwiseDistances(const features::FeatureSet& a, const features::FeatureSet& b) {
  std::vector<double> out;
  for (size_t k = 0; k < a.maps.size(); ++k) {
    for (int c = 0; c < a.maps[k].tensor.channels(); ++c) {
      auto x = a.maps[k].tensor.channel(c);
      auto y = b.maps[k].tensor.channel(c);
      double acc = 0.0;
      for (size_t i = 0; i < x.size(); ++i) acc += std::abs(x[i] - y[i]);
      out.push_back(acc / static_cast<double>(x.size()));
    }
  }
  return out;
}

}  // namespace wdc::testing
