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

#include "wdc/autodiff/graph.h"

#include <string>

#include "wdc/error.h"

namespace wdc::ad {

const char* OpName(OpKind kind) {
  switch (kind) {
    case OpKind::kInput: return "input";
    case OpKind::kParam: return "param";
    case OpKind::kConstant: return "constant";
    case OpKind::kConv2d: return "conv2d";
    case OpKind::kResize: return "bilinear_resize";
    case OpKind::kAdd: return "add";
    case OpKind::kSub: return "sub";
    case OpKind::kMul: return "mul";
    case OpKind::kMax: return "max";
    case OpKind::kSquare: return "square";
    case OpKind::kSqrtClamped: return "sqrt_clamped";
    case OpKind::kAbs: return "abs";
    case OpKind::kExp: return "exp";
    case OpKind::kLog: return "log";
    case OpKind::kSum: return "sum";
    case OpKind::kMean: return "mean";
    case OpKind::kConcat: return "concat";
    case OpKind::kSliceChannels: return "slice_channels";
    case OpKind::kSoftQuantize: return "soft_quantize";
    case OpKind::kLaplaceRate: return "laplace_rate";
  }
  return "unknown";
}

namespace {

Node MakeNode(OpKind kind, std::vector<NodeId> inputs, Shape shape) {
  Node n;
  n.kind = kind;
  n.inputs = std::move(inputs);
  n.shape = std::move(shape);
  return n;
}

}  // namespace

void Graph::Check(NodeId id) const {
  if (id < 0 || id >= size()) throw ValueError("graph node " + std::to_string(id) + " does not exist");
}

NodeId Graph::Append(Node n) {
  ShapeSize(n.shape);
  for (NodeId in : n.inputs) {
    Check(in);
    n.requires_grad = n.requires_grad || nodes_[in].requires_grad;
  }
  nodes_.push_back(std::move(n));
  return size() - 1;
}

NodeId Graph::Input(const std::string& name, Shape shape) {
  Node n = MakeNode(OpKind::kInput, {}, std::move(shape));
  n.name = name;
  return Append(std::move(n));
}

NodeId Graph::Param(const std::string& name, Shape shape) {
  Node n = MakeNode(OpKind::kParam, {}, std::move(shape));
  n.name = name;
  n.requires_grad = true;
  return Append(std::move(n));
}

NodeId Graph::Constant(Array value) {
  Node n = MakeNode(OpKind::kConstant, {}, value.shape);
  n.constant = static_cast<int>(constants_.size());
  constants_.push_back(std::move(value));
  return Append(std::move(n));
}

NodeId Graph::Conv2d(NodeId x, NodeId weight, NodeId bias, int stride, int groups,
                     imgsig::Padding padding) {
  Check(x);
  Check(weight);
  const Shape& xs = shape(x);
  const Shape& ws = shape(weight);
  if (xs.size() != 3 || ws.size() != 4) {
    throw ShapeError("conv2d needs a [C,H,W] input and [O,I,KH,KW] weights, got " +
                     ShapeString(xs) + " and " + ShapeString(ws));
  }
  imgsig::ConvGeometry g;
  g.in_channels = xs[0];
  g.height = xs[1];
  g.width = xs[2];
  g.out_channels = ws[0];
  g.kernel_h = ws[2];
  g.kernel_w = ws[3];
  g.stride = stride;
  g.groups = groups;
  g.padding = padding;
  if (groups <= 0 || xs[0] % groups != 0 || ws[1] * groups != xs[0]) {
    throw ShapeError("conv2d weights " + ShapeString(ws) + " do not match input " +
                     ShapeString(xs) + " with groups=" + std::to_string(groups));
  }
  imgsig::ValidateGeometry(g);
  Node n = MakeNode(OpKind::kConv2d, {x, weight}, {g.out_channels, g.out_height(), g.out_width()});
  if (bias >= 0) {
    Check(bias);
    if (shape(bias) != Shape{g.out_channels}) {
      throw ShapeError("conv2d bias must be [" + std::to_string(g.out_channels) + "], got " +
                       ShapeString(shape(bias)));
    }
    n.inputs.push_back(bias);
    n.has_bias = true;
  }
  n.conv = g;
  return Append(std::move(n));
}

NodeId Graph::Resize(NodeId x, int height, int width) {
  Check(x);
  if (shape(x).size() != 3) throw ShapeError("bilinear_resize needs [C,H,W], got " + ShapeString(shape(x)));
  return Append(MakeNode(OpKind::kResize, {x}, {shape(x)[0], height, width}));
}

NodeId Graph::Elementwise(OpKind kind, NodeId a, NodeId b) {
  Check(a);
  Check(b);
  const Shape& sa = shape(a);
  const Shape& sb = shape(b);
  Shape out;
  if (sa == sb || ShapeSize(sb) == 1) {
    out = sa;
  } else if (ShapeSize(sa) == 1) {
    out = sb;
  } else {
    throw ShapeError(std::string(OpName(kind)) + " shape mismatch " + ShapeString(sa) +
                     " vs " + ShapeString(sb));
  }
  return Append(MakeNode(kind, {a, b}, out));
}

NodeId Graph::Unary(OpKind kind, NodeId x) {
  Check(x);
  return Append(MakeNode(kind, {x}, shape(x)));
}

NodeId Graph::Add(NodeId a, NodeId b) { return Elementwise(OpKind::kAdd, a, b); }
NodeId Graph::Sub(NodeId a, NodeId b) { return Elementwise(OpKind::kSub, a, b); }
NodeId Graph::Mul(NodeId a, NodeId b) { return Elementwise(OpKind::kMul, a, b); }
NodeId Graph::Max(NodeId a, NodeId b) { return Elementwise(OpKind::kMax, a, b); }
NodeId Graph::Square(NodeId x) { return Unary(OpKind::kSquare, x); }
NodeId Graph::Abs(NodeId x) { return Unary(OpKind::kAbs, x); }
NodeId Graph::Exp(NodeId x) { return Unary(OpKind::kExp, x); }
NodeId Graph::Log(NodeId x) { return Unary(OpKind::kLog, x); }
NodeId Graph::SoftQuantize(NodeId x) { return Unary(OpKind::kSoftQuantize, x); }

NodeId Graph::SqrtClamped(NodeId x, double eps) {
  Check(x);
  Node n = MakeNode(OpKind::kSqrtClamped, {x}, shape(x));
  n.eps = eps;
  return Append(std::move(n));
}

NodeId Graph::Sum(NodeId x) {
  Check(x);
  return Append(MakeNode(OpKind::kSum, {x}, {}));
}

NodeId Graph::Mean(NodeId x) {
  Check(x);
  return Append(MakeNode(OpKind::kMean, {x}, {}));
}

NodeId Graph::Concat(const std::vector<NodeId>& xs) {
  if (xs.empty()) throw ShapeError("concat of nothing");
  Check(xs[0]);
  Shape out = shape(xs[0]);
  if (out.size() != 3) throw ShapeError("concat needs [C,H,W] arrays");
  for (size_t i = 1; i < xs.size(); ++i) {
    Check(xs[i]);
    const Shape& s = shape(xs[i]);
    if (s.size() != 3 || s[1] != out[1] || s[2] != out[2]) {
      throw ShapeError("concat spatial mismatch " + ShapeString(out) + " vs " + ShapeString(s));
    }
    out[0] += s[0];
  }
  return Append(MakeNode(OpKind::kConcat, xs, out));
}

NodeId Graph::SliceChannels(NodeId x, int begin, int end) {
  Check(x);
  const Shape& s = shape(x);
  if (s.size() != 3 || begin < 0 || end > s[0] || begin >= end) {
    throw ShapeError("bad channel slice [" + std::to_string(begin) + "," + std::to_string(end) +
                     ") of " + ShapeString(s));
  }
  Node n = MakeNode(OpKind::kSliceChannels, {x}, {end - begin, s[1], s[2]});
  n.begin = begin;
  n.end = end;
  return Append(std::move(n));
}

NodeId Graph::LaplaceRate(NodeId z, NodeId mu, NodeId b) {
  Check(z);
  Check(mu);
  Check(b);
  if (shape(mu) != shape(z) || shape(b) != shape(z)) {
    throw ShapeError("laplace_rate needs equal shapes, got " + ShapeString(shape(z)) + ", " +
                     ShapeString(shape(mu)) + ", " + ShapeString(shape(b)));
  }
  return Append(MakeNode(OpKind::kLaplaceRate, {z, mu, b}, shape(z)));
}

}  // namespace wdc::ad
