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

#include "fairquery/harness/synthetic.h"

#include <algorithm>
#include <string>

#include "fairquery/error.h"
#include "fairquery/rng.h"

namespace fairquery {

SyntheticData gen_synthetic(std::size_t n, std::size_t n0,
                            std::uint64_t seed) {
  if (n0 < 1 || n0 >= n) {
    throw Error(ErrorCode::kInvalidArgument,
                "synthetic data needs 1 <= n0 < n (n = " + std::to_string(n) +
                    ", n0 = " + std::to_string(n0) + ")");
  }
  SplitMix64 attr_rng(SplitMix64::derive(seed, 0));
  SplitMix64 label_rng(SplitMix64::derive(seed, 1));
  SplitMix64 score_rng(SplitMix64::derive(seed, 2));

  std::vector<std::uint8_t> a(n, 1);
  std::fill(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(n0), 0);
  shuffle(std::span<std::uint8_t>(a), attr_rng);

  std::vector<std::uint8_t> y(n);
  for (auto& v : y) v = label_rng.bernoulli(0.5) ? 1 : 0;

  std::vector<double> base(n);
  for (double& v : base) v = score_rng.uniform_open();

  return {Dataset(std::move(y), std::move(a)), std::move(base)};
}

}  // namespace fairquery
