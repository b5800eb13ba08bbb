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

// Low-level data-parallel kernels shared by the image ops, the feature
// backends and the autodiff engine. Every kernel exists twice: a plain serial
// reference in `serial::` and an OpenMP version in `omp::`. Both produce
// bit-identical output because work is split only across independent output
// elements and each element accumulates its terms in the same order.

#ifndef WDC_IMGSIG_KERNELS_H_
#define WDC_IMGSIG_KERNELS_H_

#include <span>

namespace wdc::imgsig {

enum class Padding { kZero, kReflect };

// Geometry of a 2-D cross-correlation with "same"-style padding of
// kernel/2 pixels. Output extent is ceil(in / stride).
struct ConvGeometry {
  int in_channels = 1;
  int height = 1;
  int width = 1;
  int out_channels = 1;
  int kernel_h = 1;
  int kernel_w = 1;
  int stride = 1;
  int groups = 1;
  Padding padding = Padding::kZero;

  int out_height() const { return (height + stride - 1) / stride; }
  int out_width() const { return (width + stride - 1) / stride; }
  int in_per_group() const { return in_channels / groups; }
  int out_per_group() const { return out_channels / groups; }
  size_t weight_count() const {
    return static_cast<size_t>(out_channels) * in_per_group() * kernel_h *
           kernel_w;
  }
};

// Maps a possibly out-of-range index onto [0, n) by mirror reflection without
// edge repetition (-1 -> 1, n -> n-2). A length-1 axis maps everything to 0.
int ReflectIndex(int i, int n);

// Throws ShapeError when the geometry is inconsistent (channel counts not
// divisible by groups, even kernel sizes, non-positive stride).
void ValidateGeometry(const ConvGeometry& g);

namespace serial {

// out[k] = bias[k] + sum_c in[c] (*) w[k, c]. `bias` may be empty.
void Conv2dForward(const ConvGeometry& g, std::span<const double> in,
                   std::span<const double> weights,
                   std::span<const double> bias, std::span<double> out);
// Accumulates (+=) d loss / d in.
void Conv2dBackwardInput(const ConvGeometry& g,
                         std::span<const double> grad_out,
                         std::span<const double> weights,
                         std::span<double> grad_in);
// Accumulates (+=) d loss / d weights and d loss / d bias (bias may be empty).
void Conv2dBackwardWeights(const ConvGeometry& g, std::span<const double> in,
                           std::span<const double> grad_out,
                           std::span<double> grad_weights,
                           std::span<double> grad_bias);

// Half-pixel-centre bilinear resampling of `channels` planes.
void BilinearResize(int channels, int in_h, int in_w, std::span<const double> in,
                    int out_h, int out_w, std::span<double> out);
// Accumulates (+=) the adjoint of BilinearResize.
void BilinearResizeAdjoint(int channels, int in_h, int in_w, int out_h,
                           int out_w, std::span<const double> grad_out,
                           std::span<double> grad_in);

}  // namespace serial

namespace omp {

void Conv2dForward(const ConvGeometry& g, std::span<const double> in,
                   std::span<const double> weights,
                   std::span<const double> bias, std::span<double> out);
void Conv2dBackwardInput(const ConvGeometry& g,
                         std::span<const double> grad_out,
                         std::span<const double> weights,
                         std::span<double> grad_in);
void Conv2dBackwardWeights(const ConvGeometry& g, std::span<const double> in,
                           std::span<const double> grad_out,
                           std::span<double> grad_weights,
                           std::span<double> grad_bias);
void BilinearResize(int channels, int in_h, int in_w, std::span<const double> in,
                    int out_h, int out_w, std::span<double> out);
void BilinearResizeAdjoint(int channels, int in_h, int in_w, int out_h,
                           int out_w, std::span<const double> grad_out,
                           std::span<double> grad_in);

}  // namespace omp

// Source coordinate and blend weight for one output sample along one axis.
struct ResampleTap {
  int i0;
  int i1;
  double frac;  // weight of i1; i0 gets 1 - frac.
};
ResampleTap BilinearTap(int out_index, int in_size, int out_size);

}  // namespace wdc::imgsig

#endif  // WDC_IMGSIG_KERNELS_H_
