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

#include "fairquery/harness/dataset_io.h"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include "fairquery/error.h"

namespace fairquery {
namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  if (e - b >= 2 && s[b] == '"' && s[e - 1] == '"') {
    ++b;
    --e;
  }
  return std::string(s.substr(b, e - b));
}

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t comma = line.find(',', start);
    out.push_back(trim(line.substr(start, comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

Error parse_error(std::string_view name, std::size_t line,
                  const std::string& what) {
  return Error(ErrorCode::kParse,
               std::string(name) + ":" + std::to_string(line) + ": " + what);
}

double parse_real(std::string_view token, std::string_view name,
                  std::size_t line, std::string_view column) {
  double v = 0.0;
  const char* end = token.data() + token.size();
  const auto [ptr, ec] = std::from_chars(token.data(), end, v);
  if (ec != std::errc() || ptr != end || !std::isfinite(v)) {
    throw parse_error(name, line,
                      "column '" + std::string(column) +
                          "' has non-numeric value '" + std::string(token) +
                          "'");
  }
  return v;
}

std::uint8_t parse_binary(const std::string& token,
                          const std::map<std::string, std::uint8_t>& mapping,
                          std::string_view name, std::size_t line,
                          std::string_view column) {
  if (auto it = mapping.find(token); it != mapping.end()) return it->second;
  if (token == "0") return 0;
  if (token == "1") return 1;
  throw parse_error(name, line,
                    "column '" + std::string(column) +
                        "' is not binary: '" + token + "'");
}

}  // namespace

SourceMode parse_source_mode(std::string_view name) {
  if (name == "scores") return SourceMode::kScores;
  if (name == "features") return SourceMode::kFeatures;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown dataset mode '" + std::string(name) +
                  "' (expected scores or features)");
}

std::map<std::string, std::uint8_t> parse_value_map(std::string_view spec) {
  std::map<std::string, std::uint8_t> out;
  if (trim(spec).empty()) return out;
  for (const std::string& item : split(spec)) {
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kParse,
                  "value map entry '" + item + "' is not token=0|1");
    }
    const std::string key = trim(item.substr(0, eq));
    const std::string val = trim(item.substr(eq + 1));
    if (key.empty() || (val != "0" && val != "1")) {
      throw Error(ErrorCode::kParse,
                  "value map entry '" + item + "' is not token=0|1");
    }
    out[key] = val == "1" ? 1 : 0;
  }
  return out;
}

TabularSource read_tabular(std::istream& in, SourceMode mode,
                           const ValueMapping& mapping, std::string_view name,
                           const BaselineOptions& baseline) {
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;
  std::vector<std::string> header;
  while (std::getline(in, line)) {
    ++line_no;
    if (!trim(line).empty()) {
      header = split(line);
      have_header = true;
      break;
    }
  }
  if (!have_header) throw parse_error(name, line_no, "missing header");

  const auto column = [&](std::string_view col) -> std::size_t {
    auto it = std::find(header.begin(), header.end(), col);
    if (it == header.end()) {
      throw parse_error(name, 1,
                        "missing required column '" + std::string(col) + "'");
    }
    return static_cast<std::size_t>(it - header.begin());
  };
  const std::size_t id_col = column("id");
  const std::size_t y_col = column("y");
  const std::size_t a_col = column("a");
  std::size_t score_col = 0;
  std::vector<std::size_t> feature_cols;
  TabularSource out{mode, {}, {}, Dataset({}, {}), {}};
  if (mode == SourceMode::kScores) {
    score_col = column("score");
  } else {
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (k == id_col || k == y_col || k == a_col) continue;
      feature_cols.push_back(k);
      out.feature_names.push_back(header[k]);
    }
    if (feature_cols.empty()) {
      throw parse_error(name, 1, "missing required column 'f1'");
    }
  }

  std::vector<std::uint8_t> y;
  std::vector<std::uint8_t> a;
  Matrix features(0, feature_cols.size());
  std::vector<double> feature_row(feature_cols.size());
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const std::vector<std::string> cells = split(line);
    if (cells.size() != header.size()) {
      throw parse_error(name, line_no,
                        "expected " + std::to_string(header.size()) +
                            " fields, found " + std::to_string(cells.size()));
    }
    out.ids.push_back(cells[id_col]);
    y.push_back(parse_binary(cells[y_col], mapping.y, name, line_no, "y"));
    a.push_back(parse_binary(cells[a_col], mapping.a, name, line_no, "a"));
    if (mode == SourceMode::kScores) {
      const double s = parse_real(cells[score_col], name, line_no, "score");
      if (s < 0.0 || s > 1.0) {
        throw parse_error(name, line_no,
                          "score " + cells[score_col] + " is outside [0, 1]");
      }
      out.base_row.push_back(s);
    } else {
      for (std::size_t k = 0; k < feature_cols.size(); ++k) {
        feature_row[k] = parse_real(cells[feature_cols[k]], name, line_no,
                                    header[feature_cols[k]]);
      }
      features.append_row(feature_row);
    }
  }

  const auto zeros = static_cast<std::size_t>(std::count(a.begin(), a.end(), 0));
  if (zeros == 0 || zeros == a.size()) {
    throw Error(ErrorCode::kEmptyGroup,
                std::string(name) + ": attribute column has only one group (" +
                    std::to_string(a.size() - zeros) + " advantaged, " +
                    std::to_string(zeros) + " disadvantaged)");
  }
  if (mode == SourceMode::kFeatures) {
    out.base_row = train_baseline(features, y, baseline);
    out.dataset = Dataset(std::move(y), std::move(a), std::move(features));
  } else {
    out.dataset = Dataset(std::move(y), std::move(a));
  }
  return out;
}

TabularSource ingest_csv(const std::string& path, SourceMode mode,
                         const ValueMapping& mapping,
                         const BaselineOptions& baseline) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open " + path);
  return read_tabular(in, mode, mapping, path, baseline);
}

void write_scores_csv(std::ostream& out, const Dataset& ds,
                      std::span<const double> scores) {
  if (scores.size() != ds.n()) {
    throw Error(ErrorCode::kInvalidArgument, "one score per individual needed");
  }
  out << "id,y,a,score\n";
  char buf[64];
  for (std::size_t j = 0; j < ds.n(); ++j) {
    std::snprintf(buf, sizeof buf, "%.17g", scores[j]);
    out << j << ',' << int(ds.y()[j]) << ',' << int(ds.a()[j]) << ',' << buf
        << '\n';
  }
}

}  // namespace fairquery
