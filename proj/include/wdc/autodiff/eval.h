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

#ifndef WDC_AUTODIFF_EVAL_H_
#define WDC_AUTODIFF_EVAL_H_

#include <cstdint>
#include <vector>

#include "wdc/autodiff/graph.h"
#include "wdc/autodiff/params.h"

namespace wdc::ad {

enum class QuantMode {
  kNoise,  // x + t * u, u uniform in (-1/2, 1/2), t = min(temperature, 1)
  kRound,  // round half away from zero, straight-through gradient
};

struct EvalContext {
  uint64_t seed = 0;
  int64_t step = 0;
  QuantMode quant_mode = QuantMode::kNoise;
  double temperature = 1.0;
};

// Uniform noise in (-1/2, 1/2) used by the noise surrogate for element i of
// node id.
double QuantNoise(uint64_t seed, int64_t step, int node, size_t i);

struct Evaluation {
  std::vector<Array> values;  // one per node
  const Array& operator[](NodeId id) const { return values.at(id); }
  double scalar(NodeId id) const { return values.at(id).data.at(0); }
};

// Evaluates every node. Throws ValueError if a named input or parameter is
// missing and ShapeError if its shape disagrees with the graph.
Evaluation ForwardEval(const Graph& g, const ParamSet& params, const Inputs& inputs,
                       const EvalContext& ctx = {});

// Reverse-mode gradients of the scalar node `output` for every parameter
// that it depends on. Throws ShapeError if output is not a single value.
Gradients BackwardGrad(const Graph& g, const Evaluation& forward, NodeId output);

struct ValueAndGrad {
  double value;
  Gradients grads;
};
ValueAndGrad EvalWithGrad(const Graph& g, const ParamSet& params, const Inputs& inputs,
                          NodeId output, const EvalContext& ctx = {});

}  // namespace wdc::ad

#endif  // WDC_AUTODIFF_EVAL_H_
