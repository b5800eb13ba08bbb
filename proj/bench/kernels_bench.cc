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

// Serial reference kernels against their OpenMP counterparts on the shapes
// the codec and the feature backends run. Results are bit-identical; only
// wall time differs.

#include <random>
#include <vector>

#include "benchmark/benchmark.h"
#include "wdc/imgsig/kernels.h"

namespace wdc::imgsig {
namespace {

std::vector<double> Random(size_t n, uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1, 1);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// Args: input channels, output channels, kernel, image side.
ConvGeometry Geometry(const benchmark::State& state) {
  ConvGeometry g;
  g.in_channels = static_cast<int>(state.range(0));
  g.out_channels = static_cast<int>(state.range(1));
  g.kernel_h = g.kernel_w = static_cast<int>(state.range(2));
  g.height = g.width = static_cast<int>(state.range(3));
  return g;
}

struct ConvData {
  explicit ConvData(const ConvGeometry& g)
      : in(Random(static_cast<size_t>(g.in_channels) * g.height * g.width, 1)),
        w(Random(g.weight_count(), 2)),
        b(Random(g.out_channels, 3)),
        gout(Random(static_cast<size_t>(g.out_channels) * g.out_height() * g.out_width(), 4)),
        out(gout.size()),
        gin(in.size()),
        gw(w.size()),
        gb(b.size()) {}
  std::vector<double> in, w, b, gout, out, gin, gw, gb;
};

template <bool kOmp>
void BM_ConvForward(benchmark::State& state) {
  const ConvGeometry g = Geometry(state);
  ConvData d(g);
  for (auto _ : state) {
    if constexpr (kOmp) omp::Conv2dForward(g, d.in, d.w, d.b, d.out);
    else serial::Conv2dForward(g, d.in, d.w, d.b, d.out);
    benchmark::DoNotOptimize(d.out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(d.out.size()));
}

template <bool kOmp>
void BM_ConvBackwardInput(benchmark::State& state) {
  const ConvGeometry g = Geometry(state);
  ConvData d(g);
  for (auto _ : state) {
    std::fill(d.gin.begin(), d.gin.end(), 0.0);
    if constexpr (kOmp) omp::Conv2dBackwardInput(g, d.gout, d.w, d.gin);
    else serial::Conv2dBackwardInput(g, d.gout, d.w, d.gin);
    benchmark::DoNotOptimize(d.gin.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(d.gin.size()));
}

template <bool kOmp>
void BM_ConvBackwardWeights(benchmark::State& state) {
  const ConvGeometry g = Geometry(state);
  ConvData d(g);
  for (auto _ : state) {
    std::fill(d.gw.begin(), d.gw.end(), 0.0);
    std::fill(d.gb.begin(), d.gb.end(), 0.0);
    if constexpr (kOmp) omp::Conv2dBackwardWeights(g, d.in, d.gout, d.gw, d.gb);
    else serial::Conv2dBackwardWeights(g, d.in, d.gout, d.gw, d.gb);
    benchmark::DoNotOptimize(d.gw.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(d.gout.size()));
}

// Args: channels, input side; output is twice the input side.
template <bool kOmp>
void BM_Upsample(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
  const std::vector<double> in = Random(static_cast<size_t>(c) * n * n, 5);
  std::vector<double> out(static_cast<size_t>(c) * 4 * n * n);
  for (auto _ : state) {
    if constexpr (kOmp) omp::BilinearResize(c, n, n, in, 2 * n, 2 * n, out);
    else serial::BilinearResize(c, n, n, in, 2 * n, 2 * n, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(out.size()));
}

template <bool kOmp>
void BM_UpsampleAdjoint(benchmark::State& state) {
  const int c = static_cast<int>(state.range(0)), n = static_cast<int>(state.range(1));
  const std::vector<double> gout = Random(static_cast<size_t>(c) * 4 * n * n, 6);
  std::vector<double> gin(static_cast<size_t>(c) * n * n);
  for (auto _ : state) {
    std::fill(gin.begin(), gin.end(), 0.0);
    if constexpr (kOmp) omp::BilinearResizeAdjoint(c, n, n, 2 * n, 2 * n, gout, gin);
    else serial::BilinearResizeAdjoint(c, n, n, 2 * n, 2 * n, gout, gin);
    benchmark::DoNotOptimize(gin.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(gin.size()));
}

// Synthesis layers (1x1 mixing and the final 3x3) and a filter-bank stage.
void ConvShapes(benchmark::internal::Benchmark* b) {
  b->ArgNames({"in", "out", "k", "side"});
  b->Args({8, 24, 1, 256});
  b->Args({24, 24, 1, 256});
  b->Args({24, 3, 3, 256});
  b->Args({3, 16, 5, 128});
}

void ResizeShapes(benchmark::internal::Benchmark* b) {
  b->ArgNames({"c", "side"});
  b->Args({1, 128});
  b->Args({7, 256});
}

BENCHMARK(BM_ConvForward<false>)->Name("ConvForward/serial")->Apply(ConvShapes);
BENCHMARK(BM_ConvForward<true>)->Name("ConvForward/omp")->Apply(ConvShapes)->UseRealTime();
BENCHMARK(BM_ConvBackwardInput<false>)->Name("ConvBackwardInput/serial")->Apply(ConvShapes);
BENCHMARK(BM_ConvBackwardInput<true>)->Name("ConvBackwardInput/omp")->Apply(ConvShapes)->UseRealTime();
BENCHMARK(BM_ConvBackwardWeights<false>)->Name("ConvBackwardWeights/serial")->Apply(ConvShapes);
BENCHMARK(BM_ConvBackwardWeights<true>)->Name("ConvBackwardWeights/omp")->Apply(ConvShapes)->UseRealTime();
BENCHMARK(BM_Upsample<false>)->Name("Upsample/serial")->Apply(ResizeShapes);
BENCHMARK(BM_Upsample<true>)->Name("Upsample/omp")->Apply(ResizeShapes)->UseRealTime();
BENCHMARK(BM_UpsampleAdjoint<false>)->Name("UpsampleAdjoint/serial")->Apply(ResizeShapes);
BENCHMARK(BM_UpsampleAdjoint<true>)->Name("UpsampleAdjoint/omp")->Apply(ResizeShapes)->UseRealTime();

}  // namespace
}  // namespace wdc::imgsig

BENCHMARK_MAIN();
