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

// Index tables shared by the serial and OpenMP kernel translation units.

#ifndef WDC_SRC_IMGSIG_KERNEL_TABLES_H_
#define WDC_SRC_IMGSIG_KERNEL_TABLES_H_

#include <algorithm>
#include <vector>

#include "wdc/imgsig/kernels.h"

namespace wdc::imgsig::internal {

// table[o * taps + t] = input index read by output `o` at kernel tap `t`, or -1
// when the tap falls into zero padding.
inline std::vector<int> TapTable(int out_size, int taps, int stride,
                                 int in_size, Padding padding) {
  std::vector<int> table(static_cast<size_t>(out_size) * taps);
  const int pad = taps / 2;
  for (int o = 0; o < out_size; ++o) {
    for (int t = 0; t < taps; ++t) {
      int i = o * stride + t - pad;
      if (i < 0 || i >= in_size) {
        i = padding == Padding::kReflect ? ReflectIndex(i, in_size) : -1;
      }
      table[static_cast<size_t>(o) * taps + t] = i;
    }
  }
  return table;
}

inline std::vector<ResampleTap> ResampleTable(int in_size, int out_size) {
  std::vector<ResampleTap> taps(out_size);
  for (int o = 0; o < out_size; ++o) taps[o] = BilinearTap(o, in_size, out_size);
  return taps;
}

// Outputs [lo, hi) whose tap `kx` reads in-bounds input `ox * stride + kx - pad`
// without padding; rows split into a table-driven border and a direct interior.
struct Span {
  int lo, hi;
};

inline Span InteriorSpan(const ConvGeometry& g, int kx) {
  const int ow = g.out_width();
  const int off = kx - g.kernel_w / 2;
  int lo = off >= 0 ? 0 : (-off + g.stride - 1) / g.stride;
  int hi = g.width - 1 - off < 0 ? 0 : (g.width - 1 - off) / g.stride + 1;
  lo = std::min(lo, ow);
  hi = std::clamp(hi, lo, ow);
  return {lo, hi};
}

// drow[ox] += wv * srow[col(ox, kx)] for every output column, in ascending ox.
inline void ForwardRow(const ConvGeometry& g, const std::vector<int>& cols, int kx,
                       double wv, const double* srow, double* drow) {
  const int ow = g.out_width();
  const Span s = InteriorSpan(g, kx);
  const int off = kx - g.kernel_w / 2;
  const int stride = g.stride;
  for (int ox = 0; ox < s.lo; ++ox) {
    const int ix = cols[static_cast<size_t>(ox) * g.kernel_w + kx];
    if (ix >= 0) drow[ox] += wv * srow[ix];
  }
  if (stride == 1) {
    const double* sp = srow + off;
    for (int ox = s.lo; ox < s.hi; ++ox) drow[ox] += wv * sp[ox];
  } else {
    for (int ox = s.lo; ox < s.hi; ++ox) drow[ox] += wv * srow[ox * stride + off];
  }
  for (int ox = s.hi; ox < ow; ++ox) {
    const int ix = cols[static_cast<size_t>(ox) * g.kernel_w + kx];
    if (ix >= 0) drow[ox] += wv * srow[ix];
  }
}

// grow[col(ox, kx)] += wv * orow[ox], visiting ox in ascending order so that
// reflected border taps keep the same summation order.
inline void BackwardInputRow(const ConvGeometry& g, const std::vector<int>& cols, int kx,
                             double wv, const double* orow, double* grow) {
  const int ow = g.out_width();
  const Span s = InteriorSpan(g, kx);
  const int off = kx - g.kernel_w / 2;
  const int stride = g.stride;
  for (int ox = 0; ox < s.lo; ++ox) {
    const int ix = cols[static_cast<size_t>(ox) * g.kernel_w + kx];
    if (ix >= 0) grow[ix] += wv * orow[ox];
  }
  if (stride == 1) {
    double* gp = grow + off;
    for (int ox = s.lo; ox < s.hi; ++ox) gp[ox] += wv * orow[ox];
  } else {
    for (int ox = s.lo; ox < s.hi; ++ox) grow[ox * stride + off] += wv * orow[ox];
  }
  for (int ox = s.hi; ox < ow; ++ox) {
    const int ix = cols[static_cast<size_t>(ox) * g.kernel_w + kx];
    if (ix >= 0) grow[ix] += wv * orow[ox];
  }
}

// Weight-gradient block shared by both kernel variants: for output channel k
// and input channels [ci0, ci1) of its group (at most kWeightBlock), adds
// sum over (oy, ox) of grad_out * input to every tap. Each tap accumulates in
// raster order in its own chain; handling several channels per pass
// only interleaves independent chains.
inline constexpr int kWeightBlock = 8;

inline void BackwardWeightsBlock(const ConvGeometry& g, const std::vector<int>& rows,
                                 const std::vector<int>& cols, const double* in,
                                 const double* grad_out, int k, int ci0, int ci1,
                                 double* grad_weights) {
  const int oh = g.out_height(), ow = g.out_width();
  const int ipg = g.in_per_group();
  const size_t in_plane = static_cast<size_t>(g.height) * g.width;
  const double* gout = grad_out + static_cast<size_t>(k) * oh * ow;
  const double* src = in + static_cast<size_t>((k / g.out_per_group()) * ipg + ci0) * in_plane;
  const int nb = ci1 - ci0;
  for (int ky = 0; ky < g.kernel_h; ++ky) {
    for (int kx = 0; kx < g.kernel_w; ++kx) {
      const Span span = InteriorSpan(g, kx);
      const int off = kx - g.kernel_w / 2;
      double acc[kWeightBlock] = {};
      auto border = [&](const double* srow, const double* orow, int from, int to) {
        for (int ox = from; ox < to; ++ox) {
          const int ix = cols[static_cast<size_t>(ox) * g.kernel_w + kx];
          if (ix < 0) continue;
          const double go = orow[ox];
          for (int b = 0; b < nb; ++b) acc[b] += go * srow[ix + b * in_plane];
        }
      };
      for (int oy = 0; oy < oh; ++oy) {
        const int iy = rows[static_cast<size_t>(oy) * g.kernel_h + ky];
        if (iy < 0) continue;
        const double* srow = src + static_cast<size_t>(iy) * g.width;
        const double* orow = gout + static_cast<size_t>(oy) * ow;
        border(srow, orow, 0, span.lo);
        for (int ox = span.lo; ox < span.hi; ++ox) {
          const double go = orow[ox];
          const double* sp = srow + ox * g.stride + off;
          for (int b = 0; b < nb; ++b) acc[b] += go * sp[b * in_plane];
        }
        border(srow, orow, span.hi, ow);
      }
      for (int b = 0; b < nb; ++b) {
        grad_weights[((static_cast<size_t>(k) * ipg + ci0 + b) * g.kernel_h + ky) * g.kernel_w +
                     kx] += acc[b];
      }
    }
  }
}

}  // namespace wdc::imgsig::internal

#endif  // WDC_SRC_IMGSIG_KERNEL_TABLES_H_
