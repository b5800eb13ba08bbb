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

#ifndef WDC_AUTODIFF_ADAM_H_
#define WDC_AUTODIFF_ADAM_H_

#include <map>
#include <string>
#include <vector>

#include "wdc/autodiff/params.h"

namespace wdc::ad {

struct AdamOptions {
  double lr = 1e-2;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

struct AdamState {
  struct Moments {
    std::vector<double> m;
    std::vector<double> v;
  };
  std::map<std::string, Moments> moments;
  int64_t step = 0;
};

// One bias-corrected Adam update. Each tensor's step is scaled by its
// lr_scale. Parameters absent from grads are left untouched. Throws
// ValueError naming the parameter on a NaN or infinite gradient and
// ShapeError on a size mismatch; params are unchanged when it throws.
void AdamStep(ParamSet& params, const Gradients& grads, AdamState& state,
              const AdamOptions& options);

}  // namespace wdc::ad

#endif  // WDC_AUTODIFF_ADAM_H_
