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

// Histogram text format: one bar per line, "<point> <count>". A point is a
// number, or comma-separated coordinates for d > 1. '#' starts a comment.
// Lines must be sorted by point and counts are decimal integers.

#ifndef FLEXACC_HIST_IO_H_
#define FLEXACC_HIST_IO_H_

#include <string>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "flexacc/histogram.h"

namespace flexacc {

// Parses histogram text. A bound <= 0 is inferred as floor(max coord) + 1.
absl::StatusOr<Histogram> ParseHistogramText(absl::string_view text,
                                             double bound = 0);
absl::StatusOr<Histogram> ReadHistogramFile(const std::string& path,
                                            double bound = 0);
std::string FormatHistogramText(const Histogram& h);

}  // namespace flexacc

#endif  // FLEXACC_HIST_IO_H_
