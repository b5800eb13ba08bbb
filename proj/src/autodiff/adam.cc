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

#include "wdc/autodiff/adam.h"

#include <cmath>

#include "wdc/error.h"

namespace wdc::ad {

void AdamStep(ParamSet& params, const Gradients& grads, AdamState& state,
              const AdamOptions& options) {
  for (const auto& [name, g] : grads) {
    const Array& p = params.Get(name);
    if (g.size() != p.size()) {
      throw ShapeError("gradient for '" + name + "' has " + std::to_string(g.size()) +
                       " values, parameter has " + std::to_string(p.size()));
    }
    for (double v : g.data) {
      if (!std::isfinite(v)) throw ValueError("non-finite gradient for parameter '" + name + "'");
    }
  }
  ++state.step;
  const double c1 = 1.0 - std::pow(options.beta1, static_cast<double>(state.step));
  const double c2 = 1.0 - std::pow(options.beta2, static_cast<double>(state.step));
  for (size_t k = 0; k < params.size(); ++k) {
    ParamSet::Entry& e = params.entry(k);
    auto it = grads.find(e.name);
    if (it == grads.end()) continue;
    const std::vector<double>& g = it->second.data;
    AdamState::Moments& mom = state.moments[e.name];
    if (mom.m.size() != g.size()) {
      mom.m.assign(g.size(), 0.0);
      mom.v.assign(g.size(), 0.0);
    }
    const double lr = options.lr * e.lr_scale;
    for (size_t i = 0; i < g.size(); ++i) {
      mom.m[i] = options.beta1 * mom.m[i] + (1.0 - options.beta1) * g[i];
      mom.v[i] = options.beta2 * mom.v[i] + (1.0 - options.beta2) * g[i] * g[i];
      const double mhat = mom.m[i] / c1;
      const double vhat = mom.v[i] / c2;
      e.value.data[i] -= lr * mhat / (std::sqrt(vhat) + options.eps);
    }
  }
}

}  // namespace wdc::ad
