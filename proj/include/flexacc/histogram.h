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

#ifndef FLEXACC_HISTOGRAM_H_
#define FLEXACC_HISTOGRAM_H_

#include <compare>
#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"

namespace flexacc {

// A point of the ground set [0,B)^d. One-dimensional benchmark domains use
// integral coordinates, which compare exactly.
struct GroundPoint {
  std::vector<double> coords;

  GroundPoint() = default;
  explicit GroundPoint(double x) : coords{x} {}
  explicit GroundPoint(std::vector<double> c) : coords(std::move(c)) {}

  int dim() const { return static_cast<int>(coords.size()); }
  // First coordinate; the value of a 1-D point.
  double x() const { return coords.front(); }

  auto operator<=>(const GroundPoint&) const = default;
  bool operator==(const GroundPoint&) const = default;
};

std::string ToString(const GroundPoint& p);

// Euclidean distance between two points of the same dimension.
double Distance(const GroundPoint& a, const GroundPoint& b);

// The cube [0,B)^d with the Euclidean metric.
class MetricSpace {
 public:
  MetricSpace(int dim, double bound) : dim_(dim), bound_(bound) {}
  static MetricSpace Line(double bound) { return MetricSpace(1, bound); }

  int dim() const { return dim_; }
  double bound() const { return bound_; }
  double Distance(const GroundPoint& a, const GroundPoint& b) const {
    return flexacc::Distance(a, b);
  }
  bool Contains(const GroundPoint& p) const;

  bool operator==(const MetricSpace&) const = default;

 private:
  int dim_;
  double bound_;
};

// A finite multiset over a metric ground set. Only nonzero counts are stored,
// so the key set is exactly the support.
class Histogram {
 public:
  using Entries = std::map<GroundPoint, int64_t>;

  explicit Histogram(MetricSpace space) : space_(space) {}

  // Validating constructor: counts must be non-negative and points must have
  // the space's dimension. Repeated points are summed.
  static absl::StatusOr<Histogram> Create(
      MetricSpace space,
      const std::vector<std::pair<GroundPoint, int64_t>>& counts);

  // Bars 0..counts.size()-1 over [0, bound). A non-positive bound defaults to
  // the number of bars.
  static Histogram FromBars(const std::vector<int64_t>& counts,
                            double bound = 0);

  const MetricSpace& space() const { return space_; }
  const Entries& entries() const { return entries_; }
  int64_t Count(const GroundPoint& g) const;
  int64_t size() const { return size_; }
  bool empty() const { return size_ == 0; }
  std::vector<GroundPoint> Support() const;

  // Sets x(g) = count; count 0 erases the bar. Requires count >= 0.
  void Set(const GroundPoint& g, int64_t count);
  void Add(const GroundPoint& g, int64_t delta) { Set(g, Count(g) + delta); }

  // Dense bar counts 0..n-1 for 1-D integral histograms.
  std::vector<int64_t> Bars(int n) const;

  bool operator==(const Histogram& o) const {
    return space_ == o.space_ && entries_ == o.entries_;
  }

 private:
  MetricSpace space_;
  Entries entries_;
  int64_t size_ = 0;
};

std::string ToString(const Histogram& h);

struct StatisticKind {
  enum class Type { kMax, kMin, kMaxK, kMode, kSupport };

  Type type = Type::kMax;
  int64_t k = 1;

  static StatisticKind Max() { return {Type::kMax, 1}; }
  static StatisticKind Min() { return {Type::kMin, 1}; }
  static StatisticKind MaxK(int64_t k) { return {Type::kMaxK, k}; }
  static StatisticKind Mode() { return {Type::kMode, 1}; }
  static StatisticKind Support() { return {Type::kSupport, 1}; }

  bool is_scalar() const { return type != Type::kSupport; }
  std::string Name() const;
};

// Accepts "max", "min", "mode", "support", "maxk:<k>" (case-insensitive).
absl::StatusOr<StatisticKind> ParseStatisticKind(absl::string_view s);

// A scalar for Max/Min/MaxK/Mode; the sorted support for Support.
using StatisticValue = std::variant<double, std::vector<GroundPoint>>;

// True iff sum_g |x(g) - y(g)| <= 1.
absl::StatusOr<bool> Neighbors(const Histogram& x, const Histogram& y);

// W-infinity between the normalized histograms.
absl::StatusOr<double> Dhist(const Histogram& x, const Histogram& y);

// Hausdorff distance between finite point sets.
absl::StatusOr<double> Dsupp(const std::vector<GroundPoint>& s1,
                             const std::vector<GroundPoint>& s2);

// max(|min1 - min2|, |max1 - max2|) for 1-D sets. A lower bound on Dsupp,
// equal to it when both sets are contiguous integer ranges.
absl::StatusOr<double> Dsupp1DShortcut(const std::vector<GroundPoint>& s1,
                                       const std::vector<GroundPoint>& s2);

// Errors: InvalidArgument for an empty histogram or a scalar statistic on a
// multi-dimensional space; FailedPrecondition ("undefined statistic") for
// MaxK without a qualifying bar. Mode ties go to the smallest point.
absl::StatusOr<StatisticValue> EvalStatistic(const StatisticKind& kind,
                                             const Histogram& x);
absl::StatusOr<double> EvalScalarStatistic(const StatisticKind& kind,
                                           const Histogram& x);

}  // namespace flexacc

#endif  // FLEXACC_HISTOGRAM_H_
