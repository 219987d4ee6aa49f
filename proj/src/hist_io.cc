//
// Copyright 2026 The flexacc Authors.
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

#include "flexacc/hist_io.h"

#include <cmath>
#include <fstream>
#include <sstream>
#include <utility>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"

namespace flexacc {

absl::StatusOr<Histogram> ParseHistogramText(absl::string_view text,
                                             double bound) {
  std::vector<std::pair<GroundPoint, int64_t>> bars;
  int dim = 0;
  int line_no = 0;
  for (absl::string_view line : absl::StrSplit(text, '\n')) {
    ++line_no;
    const size_t hash = line.find('#');
    if (hash != absl::string_view::npos) line = line.substr(0, hash);
    line = absl::StripAsciiWhitespace(line);
    if (line.empty()) continue;
    std::vector<absl::string_view> fields =
        absl::StrSplit(line, absl::ByAnyChar(" \t"), absl::SkipEmpty());
    if (fields.size() != 2) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": expected '<point> <count>'"));
    }
    std::vector<double> coords;
    for (absl::string_view c : absl::StrSplit(fields[0], ',')) {
      double v = 0;
      if (!absl::SimpleAtod(c, &v) || !std::isfinite(v)) {
        return absl::InvalidArgumentError(
            absl::StrCat("line ", line_no, ": bad coordinate '", c, "'"));
      }
      coords.push_back(v);
    }
    int64_t count = 0;
    if (!absl::SimpleAtoi(fields[1], &count) || count < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": bad count '", fields[1], "'"));
    }
    if (dim == 0) dim = static_cast<int>(coords.size());
    if (static_cast<int>(coords.size()) != dim) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": inconsistent dimension"));
    }
    GroundPoint g(std::move(coords));
    if (!bars.empty() && !(bars.back().first < g)) {
      return absl::InvalidArgumentError(
          absl::StrCat("line ", line_no, ": points must be strictly sorted"));
    }
    bars.emplace_back(std::move(g), count);
  }
  if (dim == 0) dim = 1;
  if (bound <= 0) {
    double hi = 0;
    for (const auto& [g, c] : bars) {
      for (double v : g.coords) hi = std::max(hi, v);
    }
    bound = std::floor(hi) + 1;
  }
  return Histogram::Create(MetricSpace(dim, bound), bars);
}

absl::StatusOr<Histogram> ReadHistogramFile(const std::string& path,
                                            double bound) {
  std::ifstream in(path);
  if (!in) return absl::NotFoundError(absl::StrCat("cannot open ", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseHistogramText(ss.str(), bound);
}

std::string FormatHistogramText(const Histogram& h) {
  std::string out;
  for (const auto& [g, c] : h.entries()) {
    absl::StrAppend(&out, absl::StrJoin(g.coords, ","), " ", c, "\n");
  }
  return out;
}

}  // namespace flexacc
