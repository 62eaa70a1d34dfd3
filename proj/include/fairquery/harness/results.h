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

#ifndef FAIRQUERY_HARNESS_RESULTS_H_
#define FAIRQUERY_HARNESS_RESULTS_H_

#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairquery/harness/experiment.h"

namespace fairquery {

enum class ResultFormat { kCsv, kJson };

ResultFormat parse_result_format(std::string_view name);

inline constexpr std::string_view kResultHeader =
    "trial,n,n0,m,epsilon,mechanism,avg_sp_err,leakage_pct,runtime_ms";

// Reals are written with 12 significant digits; an infinite epsilon is the
// token `inf` (a JSON string in JSON output).
void write_results(std::ostream& out, std::span<const ExperimentRow> rows,
                   ResultFormat format);

// Throws kInvalidArgument on an empty row set and kIo naming the path when
// the file cannot be written.
void emit_results(std::span<const ExperimentRow> rows, ResultFormat format,
                  const std::string& path);

// Inverse of the CSV writer. Throws kParse with the line number.
std::vector<ExperimentRow> read_results_csv(std::istream& in);

}  // namespace fairquery

#endif  // FAIRQUERY_HARNESS_RESULTS_H_
