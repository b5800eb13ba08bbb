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

#include "wdc/eval/pairing.h"

#include <algorithm>

#include "wdc/error.h"

namespace wdc::eval {

std::vector<ArmStat> ArmStats(const EloState& state, const std::vector<std::string>& arms,
                              double default_score) {
  std::vector<ArmStat> out;
  for (const std::string& id : arms) {
    const int i = state.Index(id);
    out.push_back(i < 0 ? ArmStat{id, default_score, 0}
                        : ArmStat{id, state.scores[i], state.counts[i]});
  }
  return out;
}

double PairValue(const ArmStat& a, const ArmStat& b) {
  const double p = WinProbability(a.score, b.score);
  return p * (1 - p) * (1.0 / (1 + a.count) + 1.0 / (1 + b.count));
}

std::pair<std::string, std::string> SelectPair(const std::vector<ArmStat>& arms) {
  if (arms.size() < 2) throw ValueError("pair selection needs at least two arms");
  std::vector<const ArmStat*> sorted;
  for (const ArmStat& a : arms) sorted.push_back(&a);
  std::sort(sorted.begin(), sorted.end(),
            [](const ArmStat* x, const ArmStat* y) { return x->id < y->id; });
  for (size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i]->id == sorted[i - 1]->id) throw ValueError("duplicate arm " + sorted[i]->id);
  }
  double best = -1.0;
  std::pair<std::string, std::string> pick;
  for (size_t i = 0; i < sorted.size(); ++i) {
    for (size_t j = i + 1; j < sorted.size(); ++j) {
      const double v = PairValue(*sorted[i], *sorted[j]);
      if (v > best) {
        best = v;
        pick = {sorted[i]->id, sorted[j]->id};
      }
    }
  }
  return pick;
}

double UnitDraw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

Task GoldenMix(Task next, double rate, std::mt19937_64& rng) {
  if (!(rate >= 0 && rate <= 1)) throw ValueError("golden rate must be in [0, 1]");
  // Both draws are always taken so the stream position does not depend on
  // the outcome.
  const double u = UnitDraw(rng);
  const bool side_a = (rng() >> 63) == 0;
  if (u < rate) {
    (side_a ? next.arm_a : next.arm_b) = kOriginalArm;
    next.golden = true;
  }
  return next;
}

}  // namespace wdc::eval
