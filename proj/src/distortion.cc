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

#include "flexacc/distortion.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "absl/strings/str_cat.h"
#include "flexacc/transport.h"

namespace flexacc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

using WeightedPoints = std::vector<std::pair<GroundPoint, int64_t>>;

WeightedPoints ToWeighted(const Histogram& h) {
  return WeightedPoints(h.entries().begin(), h.entries().end());
}

bool Dominated(const Histogram& y, const Histogram& x) {
  for (const auto& [g, c] : y.entries()) {
    if (c > x.Count(g)) return false;
  }
  return true;
}

double DropTerm(const Histogram& x, const Histogram& y) {
  return static_cast<double>(x.size() - y.size()) /
         static_cast<double>(x.size());
}

// Smallest beta at which every element of y can be matched to a distinct
// element of x; the matched elements form the returned z.
Histogram BottleneckWitness(const Histogram& x, const Histogram& y) {
  const WeightedPoints ys = ToWeighted(y);
  const WeightedPoints xs = ToWeighted(x);
  std::vector<double> candidates{0.0};
  for (const auto& [a, ca] : ys) {
    for (const auto& [b, cb] : xs) candidates.push_back(Distance(a, b));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());
  size_t lo = 0;
  size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const size_t mid = (lo + hi) / 2;
    if (BipartiteMaxFlow(ys, xs, candidates[mid], nullptr) == y.size()) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  std::vector<PairFlow> flows;
  BipartiteMaxFlow(ys, xs, candidates[lo], &flows);
  Histogram z(x.space());
  for (const auto& f : flows) z.Add(xs[f.right].first, f.amount);
  return z;
}

void Enumerate(const WeightedPoints& xs, size_t index, int64_t remaining,
               const std::vector<int64_t>& suffix, Histogram* current,
               const Histogram& y, double* best, Histogram* best_z) {
  if (remaining == 0) {
    const double m = Move(*current, y);
    if (m < *best) {
      *best = m;
      *best_z = *current;
    }
    return;
  }
  if (index == xs.size() || suffix[index] < remaining) return;
  const auto& [g, cap] = xs[index];
  for (int64_t take = std::min(cap, remaining); take >= 0; --take) {
    if (take > 0) current->Set(g, take);
    Enumerate(xs, index + 1, remaining - take, suffix, current, y, best,
              best_z);
    current->Set(g, 0);
  }
}

}  // namespace

std::string DistortionKind::Name() const {
  switch (type) {
    case Type::kDrop:
      return "drop";
    case Type::kMove:
      return "move";
    case Type::kDropMove:
      return absl::StrCat("drmv(eta=", eta, ")");
  }
  return "unknown";
}

absl::StatusOr<double> Drop(const Histogram& x, const Histogram& y) {
  if (x.empty()) return absl::InvalidArgumentError("drop from an empty x");
  if (!Dominated(y, x)) return kInf;
  return DropTerm(x, y);
}

double Move(const Histogram& x, const Histogram& y) {
  if (x.size() != y.size()) return kInf;
  if (x.empty()) return 0;
  return Winf(DiscreteDistribution::FromHistogram(x),
              DiscreteDistribution::FromHistogram(y));
}

absl::StatusOr<DrmvResult> Drmv(const Histogram& x, const Histogram& y,
                                double eta, const DrmvOptions& options) {
  if (x.empty()) return absl::InvalidArgumentError("drmv from an empty x");
  if (eta < 0) return absl::InvalidArgumentError("eta must be >= 0");
  if (options.witness.has_value()) {
    const Histogram& z = *options.witness;
    if (z.size() != y.size() || !Dominated(z, x)) {
      return absl::InvalidArgumentError(
          "witness must satisfy z <= x and |z| = |y|");
    }
    return DrmvResult{DropTerm(x, z) + eta * Move(z, y), false, z};
  }
  if (y.size() > x.size()) return DrmvResult{kInf, true, Histogram(x.space())};
  if (y.empty()) return DrmvResult{1.0, true, Histogram(x.space())};
  if (x.size() > options.enumeration_bound) {
    Histogram z = BottleneckWitness(x, y);
    return DrmvResult{DropTerm(x, y) + eta * Move(z, y), false, z};
  }
  const WeightedPoints xs = ToWeighted(x);
  std::vector<int64_t> suffix(xs.size() + 1, 0);
  for (size_t i = xs.size(); i-- > 0;) suffix[i] = suffix[i + 1] + xs[i].second;
  Histogram current(x.space());
  Histogram best_z(x.space());
  double best = kInf;
  Enumerate(xs, 0, y.size(), suffix, &current, y, &best, &best_z);
  return DrmvResult{DropTerm(x, y) + eta * best, true, best_z};
}

absl::StatusOr<double> Distort(const DistortionKind& kind, const Histogram& x,
                               const Histogram& y) {
  switch (kind.type) {
    case DistortionKind::Type::kDrop:
      return Drop(x, y);
    case DistortionKind::Type::kMove:
      return Move(x, y);
    case DistortionKind::Type::kDropMove: {
      auto r = Drmv(x, y, kind.eta);
      if (!r.ok()) return r.status();
      return r->value;
    }
  }
  return absl::InternalError("unreachable");
}

absl::StatusOr<double> Dhat(
    const DistortionKind& kind, const Histogram& x,
    const std::vector<std::pair<Histogram, double>>& distribution) {
  double worst = 0;
  for (const auto& [h, p] : distribution) {
    if (p <= 0) continue;
    auto d = Distort(kind, x, h);
    if (!d.ok()) return d.status();
    worst = std::max(worst, *d);
  }
  return worst;
}

Rational FractionalSize(const FractionalHistogram& s) {
  Rational total(0);
  for (const auto& [g, v] : s) total += v;
  return total;
}

std::optional<Rational> FractionalDrop(const Histogram& x,
                                       const FractionalHistogram& s) {
  for (const auto& [g, v] : s) {
    if (v > Rational(x.Count(g))) return std::nullopt;
  }
  return (Rational(x.size()) - FractionalSize(s)) / Rational(x.size());
}

double FractionalMove(const FractionalHistogram& s, const Histogram& y) {
  if (FractionalSize(s) != Rational(y.size())) return kInf;
  if (y.empty()) return 0;
  int64_t denom = 1;
  for (const auto& [g, v] : s) denom = std::lcm(denom, v.denominator());
  WeightedPoints sw, yw;
  for (const auto& [g, v] : s) {
    if (v > 0) sw.emplace_back(g, v.numerator() * (denom / v.denominator()));
  }
  for (const auto& [g, c] : y.entries()) yw.emplace_back(g, c * denom);
  return Winf(*DiscreteDistribution::FromWeights(sw),
              *DiscreteDistribution::FromWeights(yw));
}

Histogram LargestRemainderRound(const FractionalHistogram& s,
                                const MetricSpace& space) {
  Histogram out(space);
  std::vector<std::pair<Rational, GroundPoint>> remainders;
  Rational total(0);
  int64_t floors = 0;
  for (const auto& [g, v] : s) {
    const int64_t f = boost::rational_cast<int64_t>(v) -
                      (v.numerator() < 0 && v.denominator() != 1 ? 1 : 0);
    if (f > 0) out.Set(g, f);
    floors += f;
    total += v;
    remainders.emplace_back(v - Rational(f), g);
  }
  const int64_t target = static_cast<int64_t>(
      std::llround(boost::rational_cast<double>(total)));
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int64_t k = 0; k < target - floors && k < (int64_t)remainders.size();
       ++k) {
    out.Add(remainders[k].second, 1);
  }
  return out;
}

absl::StatusOr<DropMoveSwitchResult> DropMoveSwitch(const Histogram& x,
                                                    const Histogram& z,
                                                    const Histogram& y) {
  if (x.empty() || x.size() != z.size()) {
    return absl::InvalidArgumentError("move(x, z) must be finite");
  }
  if (!Dominated(y, z)) {
    return absl::InvalidArgumentError("drop(z, y) must be finite");
  }
  if (y.empty()) {
    return absl::InvalidArgumentError("drop(z, y) must be < 1");
  }
  DropMoveSwitchResult r{.alpha1 = Move(x, z),
                         .alpha2 = Rational(z.size() - y.size(), z.size()),
                         .s = {},
                         .coupling = {},
                         .rounded = Histogram(x.space()),
                         .rounded_drop = 0,
                         .rounded_move = 0};

  const WeightedPoints xs = ToWeighted(x);
  const WeightedPoints zs = ToWeighted(z);
  std::vector<PairFlow> flows;
  const int64_t moved = BipartiteMaxFlow(xs, zs, r.alpha1, &flows);
  if (moved != x.size()) {
    return absl::InternalError("optimal x-z coupling not found");
  }
  for (const auto& f : flows) {
    const GroundPoint& gx = xs[f.left].first;
    const GroundPoint& gz = zs[f.right].first;
    const Rational share =
        Rational(f.amount) * Rational(y.Count(gz), z.Count(gz));
    if (share.numerator() == 0) continue;
    r.s[gx] += share;
    r.coupling.emplace_back(gx, gz, share);
  }
  r.rounded = LargestRemainderRound(r.s, x.space());
  r.rounded_drop = *Drop(x, r.rounded);
  r.rounded_move = Move(r.rounded, y);
  return r;
}

}  // namespace flexacc
