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

#ifndef FAIRQUERY_ERROR_H_
#define FAIRQUERY_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace fairquery {

enum class ErrorCode {
  kInvalidArgument,
  kEmptyGroup,
  kRankDeficient,
  kInfeasible,
  kNonConvergence,
  kDegenerateColumn,
  kZeroResponse,
  kAmbiguousResponse,
  kDomain,
  kParse,
  kIo,
  kDivergence,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for every recoverable failure in the library; the
// code lets callers (the experiment runner, the CLI) branch without string
// matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace fairquery

#endif  // FAIRQUERY_ERROR_H_
