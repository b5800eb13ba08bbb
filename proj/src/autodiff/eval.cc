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

#include "wdc/autodiff/eval.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wdc/coder/laplace.h"
#include "wdc/error.h"
#include "wdc/imgsig/ops.h"

namespace wdc::ad {
namespace {

using imgsig::omp::BilinearResize;
using imgsig::omp::BilinearResizeAdjoint;
using imgsig::omp::Conv2dBackwardInput;
using imgsig::omp::Conv2dBackwardWeights;
using imgsig::omp::Conv2dForward;

inline size_t Bcast(const Array& a, size_t i) { return a.size() == 1 ? 0 : i; }

const Array& Lookup(const std::map<std::string, Array>& m, const Node& n, const char* what) {
  auto it = m.find(n.name);
  if (it == m.end()) throw ValueError(std::string("missing ") + what + " '" + n.name + "'");
  if (it->second.shape != n.shape) {
    throw ShapeError(std::string(what) + " '" + n.name + "' has shape " +
                     ShapeString(it->second.shape) + ", graph expects " + ShapeString(n.shape));
  }
  return it->second;
}

double RoundHalfAway(double x) { return std::round(x); }

// Adds d into a gradient slot, broadcasting a scalar slot by summation.
inline void Accumulate(Array& slot, size_t i, double d) { slot.data[slot.size() == 1 ? 0 : i] += d; }

}  // namespace

double QuantNoise(uint64_t seed, int64_t step, int node, size_t i) {
  const uint64_t key = imgsig::SplitMix64(
      seed ^ imgsig::SplitMix64((static_cast<uint64_t>(step) << 20) ^ static_cast<uint64_t>(node)));
  const uint64_t bits = imgsig::SplitMix64(key + i);
  return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53 - 0.5;
}

Evaluation ForwardEval(const Graph& g, const ParamSet& params, const Inputs& inputs,
                       const EvalContext& ctx) {
  Evaluation ev;
  ev.values.resize(g.size());
  for (NodeId id = 0; id < g.size(); ++id) {
    const Node& n = g.node(id);
    Array& out = ev.values[id];
    auto in = [&](int k) -> const Array& { return ev.values[n.inputs[k]]; };
    if (n.kind == OpKind::kInput) {
      out = Lookup(inputs, n, "input");
      continue;
    }
    if (n.kind == OpKind::kParam) {
      const Array& v = params.Get(n.name);
      if (v.shape != n.shape) {
        throw ShapeError("param '" + n.name + "' has shape " + ShapeString(v.shape) +
                         ", graph expects " + ShapeString(n.shape));
      }
      out = v;
      continue;
    }
    if (n.kind == OpKind::kConstant) {
      out = g.constant(n.constant);
      continue;
    }
    out = Array(n.shape);
    auto& o = out.data;
    switch (n.kind) {
      case OpKind::kConv2d:
        Conv2dForward(n.conv, in(0).data, in(1).data,
                      n.has_bias ? std::span<const double>(in(2).data) : std::span<const double>(),
                      o);
        break;
      case OpKind::kResize:
        BilinearResize(n.shape[0], in(0).shape[1], in(0).shape[2], in(0).data, n.shape[1],
                       n.shape[2], o);
        break;
      case OpKind::kAdd:
        for (size_t i = 0; i < o.size(); ++i) o[i] = in(0).data[Bcast(in(0), i)] + in(1).data[Bcast(in(1), i)];
        break;
      case OpKind::kSub:
        for (size_t i = 0; i < o.size(); ++i) o[i] = in(0).data[Bcast(in(0), i)] - in(1).data[Bcast(in(1), i)];
        break;
      case OpKind::kMul:
        for (size_t i = 0; i < o.size(); ++i) o[i] = in(0).data[Bcast(in(0), i)] * in(1).data[Bcast(in(1), i)];
        break;
      case OpKind::kMax:
        for (size_t i = 0; i < o.size(); ++i) {
          o[i] = std::max(in(0).data[Bcast(in(0), i)], in(1).data[Bcast(in(1), i)]);
        }
        break;
      case OpKind::kSquare:
        for (size_t i = 0; i < o.size(); ++i) o[i] = in(0).data[i] * in(0).data[i];
        break;
      case OpKind::kSqrtClamped:
        for (size_t i = 0; i < o.size(); ++i) o[i] = std::sqrt(std::max(in(0).data[i], 0.0));
        break;
      case OpKind::kAbs:
        for (size_t i = 0; i < o.size(); ++i) o[i] = std::abs(in(0).data[i]);
        break;
      case OpKind::kExp:
        for (size_t i = 0; i < o.size(); ++i) o[i] = std::exp(in(0).data[i]);
        break;
      case OpKind::kLog:
        for (size_t i = 0; i < o.size(); ++i) o[i] = std::log(in(0).data[i]);
        break;
      case OpKind::kSum:
      case OpKind::kMean: {
        double acc = 0.0;
        for (double v : in(0).data) acc += v;
        o[0] = n.kind == OpKind::kSum ? acc : acc / static_cast<double>(in(0).size());
        break;
      }
      case OpKind::kConcat: {
        size_t off = 0;
        for (size_t k = 0; k < n.inputs.size(); ++k) {
          std::copy(in(k).data.begin(), in(k).data.end(), o.begin() + off);
          off += in(k).size();
        }
        break;
      }
      case OpKind::kSliceChannels: {
        const size_t plane = static_cast<size_t>(n.shape[1]) * n.shape[2];
        std::copy(in(0).data.begin() + n.begin * plane, in(0).data.begin() + n.end * plane, o.begin());
        break;
      }
      case OpKind::kSoftQuantize:
        if (ctx.quant_mode == QuantMode::kRound) {
          for (size_t i = 0; i < o.size(); ++i) o[i] = RoundHalfAway(in(0).data[i]);
        } else {
          if (!(ctx.temperature > 0)) throw ValueError("noise quantization needs temperature > 0");
          const double t = std::min(ctx.temperature, 1.0);
          for (size_t i = 0; i < o.size(); ++i) {
            o[i] = in(0).data[i] + t * QuantNoise(ctx.seed, ctx.step, id, i);
          }
        }
        break;
      case OpKind::kLaplaceRate:
        for (size_t i = 0; i < o.size(); ++i) {
          o[i] = coder::LaplaceBits(in(0).data[i], in(1).data[i], in(2).data[i]);
        }
        break;
      default:
        throw ValueError(std::string("unsupported operator ") + OpName(n.kind));
    }
  }
  return ev;
}

Gradients BackwardGrad(const Graph& g, const Evaluation& fw, NodeId output) {
  if (output < 0 || output >= g.size()) throw ValueError("output node out of range");
  if (fw[output].size() != 1) {
    throw ShapeError("gradient needs a scalar output, got shape " + ShapeString(fw[output].shape));
  }
  std::vector<Array> grad(g.size());
  std::vector<bool> live(g.size(), false);
  auto slot = [&](NodeId id) -> Array* {
    if (!g.node(id).requires_grad) return nullptr;
    if (!live[id]) {
      grad[id] = Array(g.node(id).shape, 0.0);
      live[id] = true;
    }
    return &grad[id];
  };
  Gradients result;
  if (!g.node(output).requires_grad) return result;
  slot(output)->data[0] = 1.0;

  for (NodeId id = output; id >= 0; --id) {
    if (!live[id]) continue;
    const Node& n = g.node(id);
    const std::vector<double>& gy = grad[id].data;
    const std::vector<double>& y = fw[id].data;
    auto x = [&](int k) -> const Array& { return fw[n.inputs[k]]; };
    switch (n.kind) {
      case OpKind::kParam: {
        auto it = result.find(n.name);
        if (it == result.end()) {
          result.emplace(n.name, grad[id]);
        } else {
          for (size_t i = 0; i < gy.size(); ++i) it->second.data[i] += gy[i];
        }
        break;
      }
      case OpKind::kInput:
      case OpKind::kConstant:
        break;
      case OpKind::kConv2d: {
        if (Array* gx = slot(n.inputs[0])) Conv2dBackwardInput(n.conv, gy, x(1).data, gx->data);
        Array* gw = slot(n.inputs[1]);
        Array* gb = n.has_bias ? slot(n.inputs[2]) : nullptr;
        if (gw || gb) {
          std::vector<double> scratch;
          std::span<double> w_span;
          if (gw) {
            w_span = gw->data;
          } else {
            scratch.assign(x(1).size(), 0.0);
            w_span = scratch;
          }
          Conv2dBackwardWeights(n.conv, x(0).data, gy, w_span,
                                gb ? std::span<double>(gb->data) : std::span<double>());
        }
        break;
      }
      case OpKind::kResize:
        if (Array* gx = slot(n.inputs[0])) {
          BilinearResizeAdjoint(n.shape[0], x(0).shape[1], x(0).shape[2], n.shape[1], n.shape[2],
                                gy, gx->data);
        }
        break;
      case OpKind::kAdd:
      case OpKind::kSub: {
        const double sign = n.kind == OpKind::kAdd ? 1.0 : -1.0;
        if (Array* ga = slot(n.inputs[0])) {
          for (size_t i = 0; i < gy.size(); ++i) Accumulate(*ga, i, gy[i]);
        }
        if (Array* gb = slot(n.inputs[1])) {
          for (size_t i = 0; i < gy.size(); ++i) Accumulate(*gb, i, sign * gy[i]);
        }
        break;
      }
      case OpKind::kMul: {
        const Array& a = x(0);
        const Array& b = x(1);
        if (Array* ga = slot(n.inputs[0])) {
          for (size_t i = 0; i < gy.size(); ++i) Accumulate(*ga, i, gy[i] * b.data[Bcast(b, i)]);
        }
        if (Array* gb = slot(n.inputs[1])) {
          for (size_t i = 0; i < gy.size(); ++i) Accumulate(*gb, i, gy[i] * a.data[Bcast(a, i)]);
        }
        break;
      }
      case OpKind::kMax: {
        const Array& a = x(0);
        const Array& b = x(1);
        Array* ga = slot(n.inputs[0]);
        Array* gb = slot(n.inputs[1]);
        for (size_t i = 0; i < gy.size(); ++i) {
          // Ties route the gradient to the first operand.
          if (a.data[Bcast(a, i)] >= b.data[Bcast(b, i)]) {
            if (ga) Accumulate(*ga, i, gy[i]);
          } else if (gb) {
            Accumulate(*gb, i, gy[i]);
          }
        }
        break;
      }
      case OpKind::kSquare:
        if (Array* gx = slot(n.inputs[0])) {
          for (size_t i = 0; i < gy.size(); ++i) gx->data[i] += 2.0 * x(0).data[i] * gy[i];
        }
        break;
      case OpKind::kSqrtClamped:
        if (Array* gx = slot(n.inputs[0])) {
          for (size_t i = 0; i < gy.size(); ++i) {
            const double v = x(0).data[i];
            if (v > 0) gx->data[i] += gy[i] * 0.5 / std::sqrt(std::max(v, n.eps));
          }
        }
        break;
      case OpKind::kAbs:
        if (Array* gx = slot(n.inputs[0])) {
          for (size_t i = 0; i < gy.size(); ++i) {
            const double v = x(0).data[i];
            gx->data[i] += v > 0 ? gy[i] : (v < 0 ? -gy[i] : 0.0);
          }
        }
        break;
      case OpKind::kExp:
        if (Array* gx = slot(n.inputs[0])) {
          for (size_t i = 0; i < gy.size(); ++i) gx->data[i] += gy[i] * y[i];
        }
        break;
      case OpKind::kLog:
        if (Array* gx = slot(n.inputs[0])) {
          for (size_t i = 0; i < gy.size(); ++i) gx->data[i] += gy[i] / x(0).data[i];
        }
        break;
      case OpKind::kSum:
      case OpKind::kMean:
        if (Array* gx = slot(n.inputs[0])) {
          const double d =
              n.kind == OpKind::kSum ? gy[0] : gy[0] / static_cast<double>(gx->size());
          for (double& v : gx->data) v += d;
        }
        break;
      case OpKind::kConcat: {
        size_t off = 0;
        for (size_t k = 0; k < n.inputs.size(); ++k) {
          const size_t len = x(static_cast<int>(k)).size();
          if (Array* gx = slot(n.inputs[k])) {
            for (size_t i = 0; i < len; ++i) gx->data[i] += gy[off + i];
          }
          off += len;
        }
        break;
      }
      case OpKind::kSliceChannels:
        if (Array* gx = slot(n.inputs[0])) {
          const size_t off = static_cast<size_t>(n.begin) * n.shape[1] * n.shape[2];
          for (size_t i = 0; i < gy.size(); ++i) gx->data[off + i] += gy[i];
        }
        break;
      case OpKind::kSoftQuantize:
        if (Array* gx = slot(n.inputs[0])) {
          for (size_t i = 0; i < gy.size(); ++i) gx->data[i] += gy[i];
        }
        break;
      case OpKind::kLaplaceRate: {
        Array* gz = slot(n.inputs[0]);
        Array* gm = slot(n.inputs[1]);
        Array* gb = slot(n.inputs[2]);
        for (size_t i = 0; i < gy.size(); ++i) {
          auto mg = coder::LaplaceMassWithGrad(x(0).data[i], x(1).data[i], x(2).data[i]);
          if (mg.mass <= coder::kMassFloor) continue;
          const double dbits = -gy[i] / (mg.mass * std::numbers::ln2);
          if (gz) gz->data[i] -= dbits * mg.d_mu;
          if (gm) gm->data[i] += dbits * mg.d_mu;
          if (gb) gb->data[i] += dbits * mg.d_b;
        }
        break;
      }
    }
    if (n.kind != OpKind::kParam) {
      grad[id] = Array();  // release memory early
    }
  }
  return result;
}

ValueAndGrad EvalWithGrad(const Graph& g, const ParamSet& params, const Inputs& inputs,
                          NodeId output, const EvalContext& ctx) {
  Evaluation fw = ForwardEval(g, params, inputs, ctx);
  ValueAndGrad out;
  out.value = fw.scalar(output);
  out.grads = BackwardGrad(g, fw, output);
  return out;
}

}  // namespace wdc::ad
