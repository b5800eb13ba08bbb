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

// Elo scores fitted to pairwise ratings by minimising cross-entropy.

#ifndef WDC_EVAL_ELO_H_
#define WDC_EVAL_ELO_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "wdc/eval/records.h"

namespace wdc::eval {

struct EloConfig {
  double mean = 2000.0;      // gauge: average score of each connected group
  double cap = 800.0;        // score gap between groups that never lose upward
  double tolerance = 1e-9;   // gradient norm at convergence
  int max_iterations = 200;
};

// P(A beats B) = 1 / (1 + 10^((r_b - r_a) / 400)).
double WinProbability(double r_a, double r_b);

struct GoldenSummary {
  int total = 0;
  int failed = 0;
};

struct EloState {
  std::vector<std::string> arms;  // sorted
  std::vector<double> scores;
  std::vector<int> counts;        // non-golden ratings per arm
  double cross_entropy = 0.0;     // nats per non-golden rating
  double gradient_norm = 0.0;
  int iterations = 0;
  // Objective after each accepted step of the joint fit (empty when the
  // ratings split into several groups).
  std::vector<double> objective_trace;
  int components = 0;             // connected comparison groups
  std::vector<std::string> warnings;
  std::map<std::string, GoldenSummary> golden_by_rater;

  // -1 when the arm is unknown.
  int Index(const std::string& arm) const;
  // Throws ValueError for an unknown arm.
  double Score(const std::string& arm) const;
  int Count(const std::string& arm) const;
};

// Fits scores to the non-golden ratings; golden ratings are only summarised
// per rater. Arms listed in `extra_arms` but never rated get the mean score.
// Each connected component of the comparison graph is anchored to cfg.mean
// separately (with a warning). When some group of arms never loses to the
// rest the likelihood has no finite optimum; each strongly connected group
// of the win graph is then fitted on its own and successive groups are
// placed cfg.cap apart, with a warning. Throws ValueError on invalid
// records or when no non-golden rating exists.
EloState FitElo(const std::vector<RatingRecord>& ratings, const EloConfig& cfg = {},
                const std::vector<std::string>& extra_arms = {});

// Mean negative log-likelihood (nats) of the non-golden ratings under the
// given scores. Throws ValueError for an arm missing from the state.
double CrossEntropy(const std::vector<RatingRecord>& ratings, const EloState& state);

struct EloInterval {
  std::vector<std::string> arms;
  std::vector<double> lo;
  std::vector<double> hi;
};

// Percentile bootstrap over non-golden ratings: `resamples` refits on
// ratings drawn with replacement; the interval covers `level` of them.
EloInterval BootstrapElo(const std::vector<RatingRecord>& ratings, const EloConfig& cfg,
                         int resamples, double level, uint64_t seed);

}  // namespace wdc::eval

#endif  // WDC_EVAL_ELO_H_
