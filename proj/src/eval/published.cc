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

#include "wdc/eval/published.h"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace wdc::eval {
namespace {

constexpr PublishedScore kScores[] = {
    {"VVC", 0.079, 1458.8350, 1415.2091, 1502.4607},
    {"VVC", 0.148, 1848.7307, 1816.5380, 1880.9236},
    {"VVC", 0.387, 2338.5496, 2306.1050, 2370.9944},
    {"MLIC+", 0.078, 1537.7413, 1498.0228, 1577.4597},
    {"MLIC+", 0.149, 1931.5170, 1900.5481, 1962.4858},
    {"MLIC+", 0.302, 2264.1577, 2233.0432, 2295.2722},
    {"CDC", 0.244, 2138.6208, 2094.2341, 2183.0076},
    {"CDC", 0.424, 2349.2747, 2302.1516, 2396.3975},
    {"HiFiC", 0.142, 2224.2773, 2193.4236, 2255.1313},
    {"HiFiC", 0.272, 2484.2852, 2446.6738, 2521.8965},
    {"HiFiC", 0.410, 2698.0610, 2642.7197, 2753.4023},
    {"C3/MSE", 0.078, 1314.7732, 1263.9172, 1365.6293},
    {"C3/MSE", 0.151, 1794.4622, 1761.7052, 1827.2192},
    {"C3/MSE", 0.302, 2186.5173, 2156.2515, 2216.7832},
    {"C3/WDs", 0.074, 1822.3773, 1789.8812, 1854.8734},
    {"C3/WDs", 0.149, 2187.2837, 2156.9400, 2217.6272},
    {"C3/WDs", 0.294, 2435.4153, 2398.9321, 2471.8984},
    {"C3/wMSE", 0.077, 1421.4607, 1376.0242, 1466.8972},
    {"C3/wMSE", 0.151, 1838.8888, 1806.6022, 1871.1754},
    {"C3/wMSE", 0.305, 2230.5005, 2199.7979, 2261.2031},
    {"C3/MS-SSIM", 0.075, 1410.8109, 1365.3926, 1456.2291},
    {"C3/MS-SSIM", 0.154, 1854.9518, 1822.7004, 1887.2032},
    {"C3/MS-SSIM", 0.302, 2162.6143, 2131.6013, 2193.6270},
    {"C3/LPIPS", 0.0796, 1565.6017, 1496.4482, 1634.7551},
    {"C3/LPIPS", 0.1551, 1989.3185, 1930.8170, 2047.8200},
    {"C3/LPIPS", 0.3020, 2248.7358, 2191.6013, 2305.8706},
    {"C3/WD8 (no CR)", 0.0748, 1491.5714, 1420.3374, 1562.8054},
    {"C3/WD8 (no CR)", 0.1503, 1979.1648, 1917.9819, 2040.3477},
    {"C3/WD8 (no CR)", 0.3014, 2369.2527, 2306.6810, 2431.8242},
    {"C3/WD8", 0.075, 1797.9539, 1764.5658, 1831.3419},
    {"C3/WD8", 0.150, 2129.6711, 2099.0652, 2160.2773},
    {"C3/WD8", 0.298, 2334.6128, 2301.3708, 2367.8547},
};

std::string Lower(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

std::span<const PublishedScore> PublishedScores() { return kScores; }

std::optional<PublishedScore> MatchPublished(const std::string& method, double bpp) {
  std::optional<PublishedScore> best;
  double best_err = 0.25;
  for (const PublishedScore& p : kScores) {
    if (Lower(p.method) != Lower(method)) continue;
    const double err = std::abs(p.bpp - bpp) / p.bpp;
    if (err <= best_err) {
      best_err = err;
      best = p;
    }
  }
  return best;
}

}  // namespace wdc::eval
