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

// Published human-study Elo scores of the reference study, used to compare
// a re-fit of released ratings against the original ranking.

#ifndef WDC_EVAL_PUBLISHED_H_
#define WDC_EVAL_PUBLISHED_H_

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "wdc/eval/records.h"

namespace wdc::eval {

struct PublishedScore {
  const char* method;
  double bpp;
  double elo;
  double p99_lo;
  double p99_hi;
};

// Every method/rate point of the published Elo plots.
std::span<const PublishedScore> PublishedScores();

// The published point with the same method (case-insensitive) whose bpp is
// within 25% of `bpp`, closest first.
std::optional<PublishedScore> MatchPublished(const std::string& method, double bpp);

}  // namespace wdc::eval

#endif  // WDC_EVAL_PUBLISHED_H_
