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

#ifndef FAIRQUERY_HARNESS_DATASET_IO_H_
#define FAIRQUERY_HARNESS_DATASET_IO_H_

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fairquery/fairness.h"
#include "fairquery/harness/baseline.h"

namespace fairquery {

// scores: header id,y,a,score. features: header id,y,a followed by one or
// more feature columns.
enum class SourceMode { kScores, kFeatures };

SourceMode parse_source_mode(std::string_view name);

// Maps raw tokens of the y and a columns to 0/1, e.g. White=1,Black=0.
// Tokens "0" and "1" always map to themselves.
struct ValueMapping {
  std::map<std::string, std::uint8_t> y;
  std::map<std::string, std::uint8_t> a;
};

// Parses "tok=0,tok=1" into a token map. Throws kParse on malformed input.
std::map<std::string, std::uint8_t> parse_value_map(std::string_view spec);

struct TabularSource {
  SourceMode mode = SourceMode::kScores;
  std::vector<std::string> ids;
  std::vector<std::string> feature_names;
  Dataset dataset;
  // Scores column, or the baseline's scores in features mode.
  std::vector<double> base_row;
};

// Reads a dataset from `in`. `name` labels error messages. In features mode
// the base row comes from train_baseline. Throws kParse (with the line
// number) on malformed rows or a missing column and kEmptyGroup when either
// attribute group is empty.
TabularSource read_tabular(std::istream& in, SourceMode mode,
                           const ValueMapping& mapping = {},
                           std::string_view name = "<stream>",
                           const BaselineOptions& baseline = {});

// File wrapper; throws kIo naming the path when it cannot be opened.
TabularSource ingest_csv(const std::string& path, SourceMode mode,
                         const ValueMapping& mapping = {},
                         const BaselineOptions& baseline = {});

// Writes id,y,a,score rows with ids 0..n-1 and scores at 17 digits.
void write_scores_csv(std::ostream& out, const Dataset& ds,
                      std::span<const double> scores);

}  // namespace fairquery

#endif  // FAIRQUERY_HARNESS_DATASET_IO_H_
