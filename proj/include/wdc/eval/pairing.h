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

// Adaptive pair selection and golden-question mixing for the rating study.

#ifndef WDC_EVAL_PAIRING_H_
#define WDC_EVAL_PAIRING_H_

#include <random>
#include <string>
#include <utility>
#include <vector>

#include "wdc/eval/elo.h"
#include "wdc/eval/records.h"

namespace wdc::eval {

struct ArmStat {
  std::string id;
  double score = 2000.0;
  int count = 0;
};

// Current score and rating count of every arm in `arms`; arms the state does
// not know get `default_score` and count 0.
std::vector<ArmStat> ArmStats(const EloState& state, const std::vector<std::string>& arms,
                              double default_score = 2000.0);

// Information-gain proxy p(1 - p) (u_a + u_b) with p the predicted win
// probability and u = 1 / (1 + count).
double PairValue(const ArmStat& a, const ArmStat& b);

// The pair of distinct arms with the largest PairValue, returned in id
// order. Ties go to the lexicographically first pair. Throws ValueError with
// fewer than two arms or duplicate ids.
std::pair<std::string, std::string> SelectPair(const std::vector<ArmStat>& arms);

struct Task {
  std::string image_id;
  CropOrigin crop;
  std::string arm_a;
  std::string arm_b;
  bool golden = false;
};

// With probability `rate` replaces one side, chosen uniformly, by the
// original and marks the task golden. Throws ValueError unless rate is in
// [0, 1].
Task GoldenMix(Task next, double rate, std::mt19937_64& rng);

// Uniform double in [0, 1) from the top 53 bits of one draw.
double UnitDraw(std::mt19937_64& rng);

}  // namespace wdc::eval

#endif  // WDC_EVAL_PAIRING_H_
