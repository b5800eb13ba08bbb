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

#include <algorithm>

#include "kernel_tables.h"
#include "wdc/imgsig/kernels.h"

namespace wdc::imgsig::omp {

void Conv2dForward(const ConvGeometry& g, std::span<const double> in,
                   std::span<const double> weights,
                   std::span<const double> bias, std::span<double> out) {
  ValidateGeometry(g);
  const int oh = g.out_height(), ow = g.out_width();
  const int ipg = g.in_per_group(), opg = g.out_per_group();
  const auto rows = internal::TapTable(oh, g.kernel_h, g.stride, g.height, g.padding);
  const auto cols = internal::TapTable(ow, g.kernel_w, g.stride, g.width, g.padding);
  const size_t in_plane = static_cast<size_t>(g.height) * g.width;
  const size_t out_plane = static_cast<size_t>(oh) * ow;
  const long total_rows = static_cast<long>(g.out_channels) * oh;
#pragma omp parallel for schedule(static)
  for (long kr = 0; kr < total_rows; ++kr) {
    const int k = static_cast<int>(kr / oh);
    const int oy = static_cast<int>(kr % oh);
    double* drow = out.data() + k * out_plane + static_cast<size_t>(oy) * ow;
    const double b = bias.empty() ? 0.0 : bias[k];
    for (int ox = 0; ox < ow; ++ox) drow[ox] = b;
    const int group = k / opg;
    for (int ci = 0; ci < ipg; ++ci) {
      const double* src = in.data() + (group * ipg + ci) * in_plane;
      for (int ky = 0; ky < g.kernel_h; ++ky) {
        const int iy = rows[static_cast<size_t>(oy) * g.kernel_h + ky];
        if (iy < 0) continue;
        const double* srow = src + static_cast<size_t>(iy) * g.width;
        for (int kx = 0; kx < g.kernel_w; ++kx) {
          const double wv =
              weights[((static_cast<size_t>(k) * ipg + ci) * g.kernel_h + ky) *
                          g.kernel_w + kx];
          if (wv == 0.0) continue;
          internal::ForwardRow(g, cols, kx, wv, srow, drow);
        }
      }
    }
  }
}

void Conv2dBackwardInput(const ConvGeometry& g,
                         std::span<const double> grad_out,
                         std::span<const double> weights,
                         std::span<double> grad_in) {
  ValidateGeometry(g);
  const int oh = g.out_height(), ow = g.out_width();
  const int ipg = g.in_per_group(), opg = g.out_per_group();
  const auto rows = internal::TapTable(oh, g.kernel_h, g.stride, g.height, g.padding);
  const auto cols = internal::TapTable(ow, g.kernel_w, g.stride, g.width, g.padding);
  const size_t in_plane = static_cast<size_t>(g.height) * g.width;
  const size_t out_plane = static_cast<size_t>(oh) * ow;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < g.in_channels; ++c) {
    double* gin = grad_in.data() + c * in_plane;
    const int group = c / ipg;
    const int ci = c % ipg;
    for (int kk = 0; kk < opg; ++kk) {
      const int k = group * opg + kk;
      const double* gout = grad_out.data() + k * out_plane;
      for (int ky = 0; ky < g.kernel_h; ++ky) {
        for (int kx = 0; kx < g.kernel_w; ++kx) {
          const double wv =
              weights[((static_cast<size_t>(k) * ipg + ci) * g.kernel_h + ky) *
                          g.kernel_w + kx];
          if (wv == 0.0) continue;
          for (int oy = 0; oy < oh; ++oy) {
            const int iy = rows[static_cast<size_t>(oy) * g.kernel_h + ky];
            if (iy < 0) continue;
            double* grow = gin + static_cast<size_t>(iy) * g.width;
            const double* orow = gout + static_cast<size_t>(oy) * ow;
            internal::BackwardInputRow(g, cols, kx, wv, orow, grow);
          }
        }
      }
    }
  }
}

void Conv2dBackwardWeights(const ConvGeometry& g, std::span<const double> in,
                           std::span<const double> grad_out,
                           std::span<double> grad_weights,
                           std::span<double> grad_bias) {
  ValidateGeometry(g);
  const int oh = g.out_height(), ow = g.out_width();
  const int ipg = g.in_per_group();
  const auto rows = internal::TapTable(oh, g.kernel_h, g.stride, g.height, g.padding);
  const auto cols = internal::TapTable(ow, g.kernel_w, g.stride, g.width, g.padding);
  const size_t out_plane = static_cast<size_t>(oh) * ow;
  if (!grad_bias.empty()) {
#pragma omp parallel for schedule(static)
    for (int k = 0; k < g.out_channels; ++k) {
      const double* gout = grad_out.data() + k * out_plane;
      double acc = 0.0;
      for (size_t i = 0; i < out_plane; ++i) acc += gout[i];
      grad_bias[k] += acc;
    }
  }
  const int blocks = (ipg + internal::kWeightBlock - 1) / internal::kWeightBlock;
  const long jobs = static_cast<long>(g.out_channels) * blocks;
#pragma omp parallel for schedule(static)
  for (long j = 0; j < jobs; ++j) {
    const int k = static_cast<int>(j / blocks);
    const int ci0 = static_cast<int>(j % blocks) * internal::kWeightBlock;
    internal::BackwardWeightsBlock(g, rows, cols, in.data(), grad_out.data(), k, ci0,
                                   std::min(ci0 + internal::kWeightBlock, ipg),
                                   grad_weights.data());
  }
}

void BilinearResize(int channels, int in_h, int in_w, std::span<const double> in,
                    int out_h, int out_w, std::span<double> out) {
  const auto ty = internal::ResampleTable(in_h, out_h);
  const auto tx = internal::ResampleTable(in_w, out_w);
  const size_t in_plane = static_cast<size_t>(in_h) * in_w;
  const size_t out_plane = static_cast<size_t>(out_h) * out_w;
  const long total_rows = static_cast<long>(channels) * out_h;
#pragma omp parallel for schedule(static)
  for (long cy = 0; cy < total_rows; ++cy) {
    const int c = static_cast<int>(cy / out_h);
    const int y = static_cast<int>(cy % out_h);
    const double* src = in.data() + c * in_plane;
    double* dst = out.data() + c * out_plane + static_cast<size_t>(y) * out_w;
    const ResampleTap& vy = ty[y];
    const double* r0 = src + static_cast<size_t>(vy.i0) * in_w;
    const double* r1 = src + static_cast<size_t>(vy.i1) * in_w;
    for (int x = 0; x < out_w; ++x) {
      const ResampleTap& vx = tx[x];
      const double top = (1.0 - vx.frac) * r0[vx.i0] + vx.frac * r0[vx.i1];
      const double bot = (1.0 - vx.frac) * r1[vx.i0] + vx.frac * r1[vx.i1];
      dst[x] = (1.0 - vy.frac) * top + vy.frac * bot;
    }
  }
}

void BilinearResizeAdjoint(int channels, int in_h, int in_w, int out_h,
                           int out_w, std::span<const double> grad_out,
                           std::span<double> grad_in) {
  const auto ty = internal::ResampleTable(in_h, out_h);
  const auto tx = internal::ResampleTable(in_w, out_w);
  const size_t in_plane = static_cast<size_t>(in_h) * in_w;
  const size_t out_plane = static_cast<size_t>(out_h) * out_w;
#pragma omp parallel for schedule(static)
  for (int c = 0; c < channels; ++c) {
    double* gin = grad_in.data() + c * in_plane;
    const double* gout = grad_out.data() + c * out_plane;
    for (int y = 0; y < out_h; ++y) {
      const ResampleTap& vy = ty[y];
      double* r0 = gin + static_cast<size_t>(vy.i0) * in_w;
      double* r1 = gin + static_cast<size_t>(vy.i1) * in_w;
      for (int x = 0; x < out_w; ++x) {
        const ResampleTap& vx = tx[x];
        const double gv = gout[static_cast<size_t>(y) * out_w + x];
        const double top = (1.0 - vy.frac) * gv;
        const double bot = vy.frac * gv;
        r0[vx.i0] += (1.0 - vx.frac) * top;
        r0[vx.i1] += vx.frac * top;
        r1[vx.i0] += (1.0 - vx.frac) * bot;
        r1[vx.i1] += vx.frac * bot;
      }
    }
  }
}

}  // namespace wdc::imgsig::omp
