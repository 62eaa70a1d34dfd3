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

#ifndef FAIRQUERY_HARNESS_BASELINE_H_
#define FAIRQUERY_HARNESS_BASELINE_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fairquery/matrix.h"

namespace fairquery {

struct BaselineOptions {
  std::size_t epochs = 500;
  double lr = 0.5;
};

// Logistic regression on z-scored features (constant columns map to 0),
// fit by full-batch gradient descent from zero weights. Returns the in-sample
// sigmoid scores. Throws kDivergence when the loss turns non-finite.
std::vector<double> train_baseline(const Matrix& features,
                                   std::span<const std::uint8_t> y,
                                   const BaselineOptions& options = {});

}  // namespace fairquery

#endif  // FAIRQUERY_HARNESS_BASELINE_H_
