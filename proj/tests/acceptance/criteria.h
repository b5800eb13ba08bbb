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

// Acceptance criteria of the library, each a self-contained check with a
// pass/fail verdict and a one-line summary. Shared by the acceptance binary
// and the `selftest` subcommand.

#ifndef WDC_TESTS_ACCEPTANCE_CRITERIA_H_
#define WDC_TESTS_ACCEPTANCE_CRITERIA_H_

#include <functional>
#include <set>
#include <string>
#include <vector>

namespace wdc::acceptance {

struct Options {
  std::set<int> only;      // empty: every criterion
  bool quick = false;      // skip the codec optimisation criteria (6, 7)
  std::string archive;     // released rating archive directory for 11
  bool verbose = false;
};

struct Result {
  int id = 0;
  std::string title;
  bool pass = false;
  bool skipped = false;
  std::string detail;
  double seconds = 0.0;
};

struct Criterion {
  int id;
  std::string title;
  bool heavy;  // minutes of codec optimisation
  std::function<Result(const Options&)> run;
};

const std::vector<Criterion>& Criteria();

// Runs the selected criteria in order, calling `report` after each.
std::vector<Result> RunCriteria(const Options& opt,
                                const std::function<void(const Result&)>& report = {});

// "AC<id> PASS|FAIL|SKIP  <title>: <detail> (<seconds> s)".
std::string FormatResult(const Result& r);

}  // namespace wdc::acceptance

#endif  // WDC_TESTS_ACCEPTANCE_CRITERIA_H_
