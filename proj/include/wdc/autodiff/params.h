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

#ifndef WDC_AUTODIFF_PARAMS_H_
#define WDC_AUTODIFF_PARAMS_H_

#include <map>
#include <string>
#include <vector>

#include "wdc/autodiff/array.h"

namespace wdc::ad {

// Named trainable tensors, each with a learning-rate multiplier. Iteration
// order is insertion order.
class ParamSet {
 public:
  struct Entry {
    std::string name;
    Array value;
    double lr_scale = 1.0;
  };

  // Throws ValueError on a duplicate name or non-finite values.
  void Add(const std::string& name, Array value, double lr_scale = 1.0);

  bool Contains(const std::string& name) const { return index_.count(name) > 0; }
  const Array& Get(const std::string& name) const;
  Array& GetMutable(const std::string& name);
  const Entry& entry(size_t i) const { return entries_[i]; }
  Entry& entry(size_t i) { return entries_[i]; }
  size_t size() const { return entries_.size(); }
  size_t ValueCount() const;

  std::vector<Entry>::const_iterator begin() const { return entries_.begin(); }
  std::vector<Entry>::const_iterator end() const { return entries_.end(); }

  // Throws ValueError naming the first tensor holding a NaN or infinity.
  void CheckFinite() const;

 private:
  std::vector<Entry> entries_;
  std::map<std::string, size_t> index_;
};

using Gradients = std::map<std::string, Array>;
using Inputs = std::map<std::string, Array>;

}  // namespace wdc::ad

#endif  // WDC_AUTODIFF_PARAMS_H_
