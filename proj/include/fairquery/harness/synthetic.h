//
// Copyright 2026 The FairQuery Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef FAIRQUERY_HARNESS_SYNTHETIC_H_
#define FAIRQUERY_HARNESS_SYNTHETIC_H_

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fairquery/fairness.h"

namespace fairquery {

struct SyntheticData {
  Dataset dataset;
  // Scores in (0, 1), drawn independently of the attributes.
  std::vector<double> base_row;
};

// Exactly n0 disadvantaged individuals at uniformly random positions,
// labels Bernoulli(1/2), base scores U(0, 1). Requires 1 <= n0 < n.
SyntheticData gen_synthetic(std::size_t n, std::size_t n0, std::uint64_t seed);

}  // namespace fairquery

#endif  // FAIRQUERY_HARNESS_SYNTHETIC_H_
