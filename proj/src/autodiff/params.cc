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

#include "wdc/autodiff/params.h"

#include "wdc/error.h"

namespace wdc::ad {

void ParamSet::Add(const std::string& name, Array value, double lr_scale) {
  if (Contains(name)) throw ValueError("duplicate parameter name '" + name + "'");
  if (!value.AllFinite()) throw ValueError("parameter '" + name + "' is not finite");
  index_[name] = entries_.size();
  entries_.push_back({name, std::move(value), lr_scale});
}

const Array& ParamSet::Get(const std::string& name) const {
  auto it = index_.find(name);
  if (it == index_.end()) throw ValueError("unknown parameter '" + name + "'");
  return entries_[it->second].value;
}

Array& ParamSet::GetMutable(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) throw ValueError("unknown parameter '" + name + "'");
  return entries_[it->second].value;
}

size_t ParamSet::ValueCount() const {
  size_t n = 0;
  for (const auto& e : entries_) n += e.value.size();
  return n;
}

void ParamSet::CheckFinite() const {
  for (const auto& e : entries_) {
    if (!e.value.AllFinite()) throw ValueError("parameter '" + e.name + "' is not finite");
  }
}

}  // namespace wdc::ad
