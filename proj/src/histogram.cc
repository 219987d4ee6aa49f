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

#include "flexacc/histogram.h"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>

#include "absl/strings/ascii.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_join.h"
#include "flexacc/transport.h"

namespace flexacc {

std::string ToString(const GroundPoint& p) {
  if (p.dim() == 1) return absl::StrCat(p.x());
  return absl::StrCat("(", absl::StrJoin(p.coords, ","), ")");
}

double Distance(const GroundPoint& a, const GroundPoint& b) {
  if (a.dim() == 1 && b.dim() == 1) return std::abs(a.x() - b.x());
  double s = 0;
  for (size_t i = 0; i < a.coords.size(); ++i) {
    const double d = a.coords[i] - b.coords[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool MetricSpace::Contains(const GroundPoint& p) const {
  if (p.dim() != dim_) return false;
  for (double c : p.coords) {
    if (!std::isfinite(c) || c < 0 || c >= bound_) return false;
  }
  return true;
}

absl::StatusOr<Histogram> Histogram::Create(
    MetricSpace space,
    const std::vector<std::pair<GroundPoint, int64_t>>& counts) {
  Histogram h(space);
  for (const auto& [g, c] : counts) {
    if (c < 0) {
      return absl::InvalidArgumentError(
          absl::StrCat("negative count at ", ToString(g)));
    }
    if (g.dim() != space.dim()) {
      return absl::InvalidArgumentError(
          absl::StrCat("point ", ToString(g), " has wrong dimension"));
    }
    for (double v : g.coords) {
      if (!std::isfinite(v)) {
        return absl::InvalidArgumentError("non-finite coordinate");
      }
    }
    h.Add(g, c);
  }
  return h;
}

Histogram Histogram::FromBars(const std::vector<int64_t>& counts,
                              double bound) {
  if (bound <= 0) bound = static_cast<double>(counts.size());
  Histogram h(MetricSpace::Line(bound));
  for (size_t i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0) h.Set(GroundPoint(static_cast<double>(i)), counts[i]);
  }
  return h;
}

int64_t Histogram::Count(const GroundPoint& g) const {
  auto it = entries_.find(g);
  return it == entries_.end() ? 0 : it->second;
}

std::vector<GroundPoint> Histogram::Support() const {
  std::vector<GroundPoint> out;
  out.reserve(entries_.size());
  for (const auto& [g, c] : entries_) out.push_back(g);
  return out;
}

void Histogram::Set(const GroundPoint& g, int64_t count) {
  auto it = entries_.find(g);
  if (it != entries_.end()) {
    size_ -= it->second;
    if (count == 0) {
      entries_.erase(it);
    } else {
      it->second = count;
    }
  } else if (count != 0) {
    entries_.emplace(g, count);
  }
  size_ += count;
}

std::vector<int64_t> Histogram::Bars(int n) const {
  std::vector<int64_t> out(n, 0);
  for (const auto& [g, c] : entries_) {
    const double v = g.x();
    if (v >= 0 && v < n && v == std::floor(v)) out[static_cast<int>(v)] = c;
  }
  return out;
}

std::string ToString(const Histogram& h) {
  std::string out = "{";
  bool first = true;
  for (const auto& [g, c] : h.entries()) {
    absl::StrAppend(&out, first ? "" : ", ", ToString(g), ":", c);
    first = false;
  }
  return out + "}";
}

std::string StatisticKind::Name() const {
  switch (type) {
    case Type::kMax:
      return "max";
    case Type::kMin:
      return "min";
    case Type::kMaxK:
      return absl::StrCat("maxk:", k);
    case Type::kMode:
      return "mode";
    case Type::kSupport:
      return "support";
  }
  return "unknown";
}

absl::StatusOr<StatisticKind> ParseStatisticKind(absl::string_view s) {
  const std::string v = absl::AsciiStrToLower(s);
  if (v == "max") return StatisticKind::Max();
  if (v == "min") return StatisticKind::Min();
  if (v == "mode") return StatisticKind::Mode();
  if (v == "support") return StatisticKind::Support();
  if (v.rfind("maxk:", 0) == 0) {
    int64_t k = 0;
    if (!absl::SimpleAtoi(v.substr(5), &k) || k < 1) {
      return absl::InvalidArgumentError(
          absl::StrCat("MaxK requires k >= 1: ", s));
    }
    return StatisticKind::MaxK(k);
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown statistic: ", s));
}

absl::StatusOr<bool> Neighbors(const Histogram& x, const Histogram& y) {
  if (!(x.space() == y.space())) {
    return absl::InvalidArgumentError("histograms over different spaces");
  }
  int64_t diff = 0;
  for (const auto& [g, c] : x.entries()) diff += std::llabs(c - y.Count(g));
  for (const auto& [g, c] : y.entries()) {
    if (x.Count(g) == 0) diff += c;
  }
  return diff <= 1;
}

absl::StatusOr<double> Dhist(const Histogram& x, const Histogram& y) {
  if (x.empty() || y.empty()) {
    return absl::InvalidArgumentError("dhist of an empty histogram");
  }
  if (!(x.space() == y.space())) {
    return absl::InvalidArgumentError("histograms over different spaces");
  }
  return Winf(DiscreteDistribution::FromHistogram(x),
              DiscreteDistribution::FromHistogram(y));
}

absl::StatusOr<double> Dsupp(const std::vector<GroundPoint>& s1,
                             const std::vector<GroundPoint>& s2) {
  if (s1.empty() || s2.empty()) {
    return absl::InvalidArgumentError("dsupp of an empty set");
  }
  auto directed = [](const std::vector<GroundPoint>& a,
                     const std::vector<GroundPoint>& b) {
    double worst = 0;
    for (const auto& p : a) {
      double best = std::numeric_limits<double>::infinity();
      for (const auto& q : b) best = std::min(best, Distance(p, q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(s1, s2), directed(s2, s1));
}

absl::StatusOr<double> Dsupp1DShortcut(const std::vector<GroundPoint>& s1,
                                       const std::vector<GroundPoint>& s2) {
  if (s1.empty() || s2.empty()) {
    return absl::InvalidArgumentError("dsupp of an empty set");
  }
  auto [min1, max1] = std::minmax_element(s1.begin(), s1.end());
  auto [min2, max2] = std::minmax_element(s2.begin(), s2.end());
  return std::max(std::abs(min1->x() - min2->x()),
                  std::abs(max1->x() - max2->x()));
}

absl::StatusOr<StatisticValue> EvalStatistic(const StatisticKind& kind,
                                             const Histogram& x) {
  if (x.empty()) {
    return absl::InvalidArgumentError("statistic of an empty histogram");
  }
  if (kind.type == StatisticKind::Type::kSupport) return x.Support();
  if (x.space().dim() != 1) {
    return absl::InvalidArgumentError(
        absl::StrCat(kind.Name(), " is defined on 1-D spaces only"));
  }
  const auto& e = x.entries();
  switch (kind.type) {
    case StatisticKind::Type::kMax:
      return e.rbegin()->first.x();
    case StatisticKind::Type::kMin:
      return e.begin()->first.x();
    case StatisticKind::Type::kMaxK:
      if (kind.k < 1) return absl::InvalidArgumentError("MaxK requires k >= 1");
      for (auto it = e.rbegin(); it != e.rend(); ++it) {
        if (it->second >= kind.k) return it->first.x();
      }
      return absl::FailedPreconditionError(
          absl::StrCat("undefined statistic: no bar with count >= ", kind.k));
    case StatisticKind::Type::kMode: {
      auto best = e.begin();
      for (auto it = e.begin(); it != e.end(); ++it) {
        if (it->second > best->second) best = it;
      }
      return best->first.x();
    }
    case StatisticKind::Type::kSupport:
      break;
  }
  return absl::InternalError("unreachable");
}

absl::StatusOr<double> EvalScalarStatistic(const StatisticKind& kind,
                                           const Histogram& x) {
  if (!kind.is_scalar()) {
    return absl::InvalidArgumentError("support is not a scalar statistic");
  }
  auto v = EvalStatistic(kind, x);
  if (!v.ok()) return v.status();
  return std::get<double>(*v);
}

}  // namespace flexacc
