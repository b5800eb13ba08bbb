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

#ifndef WDC_AUTODIFF_GRAPH_H_
#define WDC_AUTODIFF_GRAPH_H_

#include <string>
#include <vector>

#include "wdc/autodiff/array.h"
#include "wdc/imgsig/kernels.h"

namespace wdc::ad {

enum class OpKind {
  kInput,
  kParam,
  kConstant,
  kConv2d,
  kResize,
  kAdd,
  kSub,
  kMul,
  kMax,
  kSquare,
  kSqrtClamped,
  kAbs,
  kExp,
  kLog,
  kSum,
  kMean,
  kConcat,
  kSliceChannels,
  kSoftQuantize,
  kLaplaceRate,
};

const char* OpName(OpKind kind);

using NodeId = int;

struct Node {
  OpKind kind;
  std::vector<NodeId> inputs;
  Shape shape;
  std::string name;        // inputs and params
  bool requires_grad = false;
  int constant = -1;       // index into the graph's constant pool
  imgsig::ConvGeometry conv;
  bool has_bias = false;
  int begin = 0;           // channel slice
  int end = 0;
  double eps = 0.0;        // gradient clamp for sqrt
};

// Static computation graph. Nodes are appended in topological order, so a
// node's inputs always precede it. Elementwise binary ops accept equal
// shapes or a scalar on either side. Image-like arrays are [C, H, W]; conv
// weights are [O, I/groups, KH, KW] and biases [O].
class Graph {
 public:
  NodeId Input(const std::string& name, Shape shape);
  NodeId Param(const std::string& name, Shape shape);
  NodeId Constant(Array value);
  NodeId Scalar(double v) { return Constant(Array::Scalar(v)); }

  NodeId Conv2d(NodeId x, NodeId weight, NodeId bias, int stride = 1, int groups = 1,
                imgsig::Padding padding = imgsig::Padding::kZero);
  NodeId Conv2d(NodeId x, NodeId weight, int stride = 1, int groups = 1,
                imgsig::Padding padding = imgsig::Padding::kZero) {
    return Conv2d(x, weight, -1, stride, groups, padding);
  }
  NodeId Resize(NodeId x, int height, int width);
  NodeId Add(NodeId a, NodeId b);
  NodeId Sub(NodeId a, NodeId b);
  NodeId Mul(NodeId a, NodeId b);
  NodeId Max(NodeId a, NodeId b);
  NodeId Square(NodeId x);
  // sqrt(max(x, 0)); the derivative is evaluated at max(x, eps) so it stays
  // finite, and is zero for x <= 0.
  NodeId SqrtClamped(NodeId x, double eps = 1e-12);
  NodeId Abs(NodeId x);
  NodeId Exp(NodeId x);
  NodeId Log(NodeId x);
  NodeId Sum(NodeId x);
  NodeId Mean(NodeId x);
  NodeId Concat(const std::vector<NodeId>& xs);
  NodeId SliceChannels(NodeId x, int begin, int end);
  // Quantization surrogate; the mode and temperature come from the
  // evaluation context.
  NodeId SoftQuantize(NodeId x);
  // Elementwise -log2(max(P(z), 2^-16)) for z under Laplace(mu, b).
  NodeId LaplaceRate(NodeId z, NodeId mu, NodeId b);

  NodeId Relu(NodeId x) { return Max(x, Scalar(0.0)); }

  const Node& node(NodeId id) const { return nodes_.at(id); }
  const Array& constant(int index) const { return constants_.at(index); }
  int size() const { return static_cast<int>(nodes_.size()); }
  const Shape& shape(NodeId id) const { return node(id).shape; }

 private:
  NodeId Append(Node n);
  NodeId Elementwise(OpKind kind, NodeId a, NodeId b);
  NodeId Unary(OpKind kind, NodeId x);
  void Check(NodeId id) const;

  std::vector<Node> nodes_;
  std::vector<Array> constants_;
};

}  // namespace wdc::ad

#endif  // WDC_AUTODIFF_GRAPH_H_
