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

#include "fairquery/harness/results.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>

#include <json.hpp>

#include "fairquery/error.h"

namespace fairquery {
namespace {

std::string real(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_real(const std::string& token, std::size_t line) {
  if (token == "inf") return std::numeric_limits<double>::infinity();
  if (token == "-inf") return -std::numeric_limits<double>::infinity();
  try {
    std::size_t used = 0;
    const double v = std::stod(token, &used);
    if (used == token.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParse, "results line " + std::to_string(line) +
                                     ": bad number '" + token + "'");
}

std::size_t parse_count(const std::string& token, std::size_t line) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(token, &used);
    if (used == token.size()) return static_cast<std::size_t>(v);
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::kParse, "results line " + std::to_string(line) +
                                     ": bad count '" + token + "'");
}

}  // namespace

ResultFormat parse_result_format(std::string_view name) {
  if (name == "csv") return ResultFormat::kCsv;
  if (name == "json") return ResultFormat::kJson;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown result format '" + std::string(name) + "'");
}

void write_results(std::ostream& out, std::span<const ExperimentRow> rows,
                   ResultFormat format) {
  if (format == ResultFormat::kCsv) {
    out << kResultHeader << '\n';
    for (const ExperimentRow& r : rows) {
      out << r.trial << ',' << r.n << ',' << r.n0 << ',' << r.m << ','
          << real(r.epsilon) << ',' << mechanism_name(r.mechanism) << ','
          << real(r.avg_sp_err) << ',' << real(r.leakage_pct) << ','
          << real(r.runtime_ms) << '\n';
    }
    return;
  }
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const ExperimentRow& r : rows) {
    nlohmann::ordered_json o;
    o["trial"] = r.trial;
    o["n"] = r.n;
    o["n0"] = r.n0;
    o["m"] = r.m;
    if (std::isinf(r.epsilon)) {
      o["epsilon"] = "inf";
    } else {
      o["epsilon"] = std::stod(real(r.epsilon));
    }
    o["mechanism"] = std::string(mechanism_name(r.mechanism));
    o["avg_sp_err"] = std::stod(real(r.avg_sp_err));
    o["leakage_pct"] = std::stod(real(r.leakage_pct));
    o["runtime_ms"] = std::stod(real(r.runtime_ms));
    arr.push_back(std::move(o));
  }
  out << arr.dump(2) << '\n';
}

void emit_results(std::span<const ExperimentRow> rows, ResultFormat format,
                  const std::string& path) {
  if (rows.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "no result rows to write");
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open " + path + " for writing");
  write_results(out, rows, format);
  out.flush();
  if (!out) throw Error(ErrorCode::kIo, "write to " + path + " failed");
}

std::vector<ExperimentRow> read_results_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kResultHeader) {
    throw Error(ErrorCode::kParse, "results line 1: unexpected header");
  }
  std::vector<ExperimentRow> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 9) {
      throw Error(ErrorCode::kParse, "results line " + std::to_string(line_no) +
                                         ": expected 9 fields");
    }
    ExperimentRow r;
    r.trial = parse_count(f[0], line_no);
    r.n = parse_count(f[1], line_no);
    r.n0 = parse_count(f[2], line_no);
    r.m = parse_count(f[3], line_no);
    r.epsilon = parse_real(f[4], line_no);
    r.mechanism = parse_mechanism(f[5]);
    r.avg_sp_err = parse_real(f[6], line_no);
    r.leakage_pct = parse_real(f[7], line_no);
    r.runtime_ms = parse_real(f[8], line_no);
    rows.push_back(std::move(r));
  }
  return rows;
}

}  // namespace fairquery
