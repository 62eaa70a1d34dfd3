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

#ifndef FAIRQUERY_RNG_H_
#define FAIRQUERY_RNG_H_

#include <cstdint>
#include <span>
#include <utility>

namespace fairquery {

// SplitMix64 (Steele, Lea and Flood 2014): state advances by the golden-gamma
// constant 0x9e3779b97f4a7c15 and each output is the state passed through the
// MurmurHash3-style finalizer. Chosen over std:: engines and distributions
// because its output sequence, and everything derived from it below, is
// fixed by this file rather than by the standard library implementation.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next();

  // Uniform on the open interval (0, 1): (k + 0.5) / 2^53 for a 53-bit k.
  double uniform_open();
  // Uniform on [lo, hi).
  double uniform(double lo, double hi);
  bool bernoulli(double p);
  // Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound);

  // Independent stream keyed by (this generator's seed, stream).
  static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
};

// Fisher-Yates, highest index first.
template <typename T>
void shuffle(std::span<T> values, SplitMix64& rng) {
  for (std::size_t i = values.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng.below(i));
    std::swap(values[i - 1], values[j]);
  }
}

}  // namespace fairquery

#endif  // FAIRQUERY_RNG_H_
