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

#include "flexacc/baselines.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "absl/strings/ascii.h"
#include "absl/strings/str_cat.h"

namespace flexacc {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Max (k = 1) and MaxK.
void MaxKCosts(const std::vector<int64_t>& h, int64_t k,
               std::vector<double>* min_cost) {
  const int n = static_cast<int>(h.size());
  std::vector<int64_t> le(n), prefix(n + 1, 0);
  for (int i = 0; i < n; ++i) {
    le[i] = std::max<int64_t>(0, h[i] - (k - 1));
    prefix[i + 1] = prefix[i] + le[i];
  }
  auto sum_le = [&](int lo, int hi) -> int64_t {
    if (lo > hi) return 0;
    return prefix[hi + 1] - prefix[lo];
  };
  auto ge = [&](int i) { return std::max<int64_t>(0, k - h[i]); };
  auto relax = [&](int a, int b, int64_t cost) {
    double& slot = (*min_cost)[std::abs(a - b)];
    slot = std::min(slot, static_cast<double>(cost));
  };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      if (b > a) {
        const int64_t stat = a == 0 ? 0 : ge(a);
        const int lo = a == 0 ? 1 : a + 1;
        relax(a, b,
              stat + sum_le(lo, n - 1) - le[b] + std::abs(h[b] - (k - 1)));
      } else if (b >= 1) {
        relax(a, b,
              std::abs(h[a] - k) + ge(b) + sum_le(b + 1, a - 1) +
                  sum_le(a + 1, n - 1));
      } else {
        relax(a, b,
              std::abs(h[a] - k) + sum_le(1, a - 1) + sum_le(a + 1, n - 1));
      }
    }
  }
}

void ModeCosts(const std::vector<int64_t>& h, std::vector<double>* min_cost) {
  const int n = static_cast<int>(h.size());
  const int64_t top = *std::max_element(h.begin(), h.end());
  // excess[c][i] = sum_{j < i} max(0, h[j] - c) for c in [0, top + 1].
  std::vector<std::vector<int64_t>> excess(top + 2,
                                           std::vector<int64_t>(n + 1, 0));
  for (int64_t c = 0; c <= top + 1; ++c) {
    for (int i = 0; i < n; ++i) {
      excess[c][i + 1] = excess[c][i] + std::max<int64_t>(0, h[i] - c);
    }
  }
  for (int a = 0; a < n; ++a) {
    for (int64_t c = a == 0 ? 0 : 1; c <= top + 1; ++c) {
      // Bars below a are capped at c - 1, bars above at c.
      const int64_t below = c >= 1 ? excess[c - 1][a] : 0;
      const int64_t above = excess[c][n] - excess[c][a + 1];
      const int64_t base = std::abs(h[a] - c) + below + above;
      for (int b = 0; b < n; ++b) {
        if (b == a) continue;
        const int64_t target = b > a ? c : c - 1;
        if (target < 0) continue;
        const int64_t cap = b > a ? c : c - 1;
        const int64_t own = std::max<int64_t>(0, h[b] - cap);
        const int64_t cost = base - own + std::abs(h[b] - target);
        double& slot = (*min_cost)[std::abs(a - b)];
        slot = std::min(slot, static_cast<double>(cost));
      }
    }
  }
}

int64_t SampleIndex(const std::vector<double>& weights, RngStream& rng) {
  double total = 0;
  for (double w : weights) total += w;
  double u = rng.Uniform01() * total;
  for (size_t i = 0; i < weights.size(); ++i) {
    if (u < weights[i]) return static_cast<int64_t>(i);
    u -= weights[i];
  }
  for (size_t i = weights.size(); i-- > 0;) {
    if (weights[i] > 0) return static_cast<int64_t>(i);
  }
  return 0;
}

absl::Status CheckPrivacy(double epsilon, double delta) {
  if (!(epsilon > 0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (!(delta > 0 && delta < 1)) {
    return absl::InvalidArgumentError("delta must be in (0, 1)");
  }
  return absl::OkStatus();
}

}  // namespace

std::string BaselineName(BaselineKind kind) {
  switch (kind) {
    case BaselineKind::kExponential:
      return "exponential";
    case BaselineKind::kPtr:
      return "ptr";
    case BaselineKind::kSmoothSensitivity:
      return "smooth_sensitivity";
    case BaselineKind::kBns:
      return "bns";
    case BaselineKind::kSanPoints:
      return "sanpoints";
  }
  return "unknown";
}

absl::StatusOr<BaselineKind> ParseBaselineKind(absl::string_view s) {
  const std::string lower = absl::AsciiStrToLower(s);
  for (BaselineKind k :
       {BaselineKind::kExponential, BaselineKind::kPtr,
        BaselineKind::kSmoothSensitivity, BaselineKind::kBns,
        BaselineKind::kSanPoints}) {
    if (lower == BaselineName(k)) return k;
  }
  return absl::InvalidArgumentError(absl::StrCat("unknown baseline: ", s));
}

absl::StatusOr<int> DomainBars(const Histogram& x) {
  const double b = x.space().bound();
  if (x.space().dim() != 1 || b != std::floor(b) || b < 1) {
    return absl::InvalidArgumentError("baselines need a 1-D integer domain");
  }
  for (const auto& [g, c] : x.entries()) {
    if (g.x() != std::floor(g.x())) {
      return absl::InvalidArgumentError("baselines need integral points");
    }
  }
  return static_cast<int>(b);
}

absl::StatusOr<int64_t> ExtendedStatistic(const StatisticKind& kind,
                                          const Histogram& x) {
  auto bars = DomainBars(x);
  if (!bars.ok()) return bars.status();
  const std::vector<int64_t> h = x.Bars(*bars);
  switch (kind.type) {
    case StatisticKind::Type::kMax:
    case StatisticKind::Type::kMaxK: {
      const int64_t k = kind.type == StatisticKind::Type::kMax ? 1 : kind.k;
      for (int i = *bars - 1; i >= 0; --i) {
        if (h[i] >= k) return i;
      }
      return 0;
    }
    case StatisticKind::Type::kMode:
      return std::max_element(h.begin(), h.end()) - h.begin();
    default:
      break;
  }
  return absl::InvalidArgumentError(
      absl::StrCat("baselines do not support ", kind.Name()));
}

double StabilityProfile::LocalSensitivity() const {
  double ls = 0;
  for (size_t v = 1; v < min_cost.size(); ++v) {
    if (min_cost[v] == 0) ls = static_cast<double>(v);
  }
  return ls;
}

double StabilityProfile::DistanceToInstability() const {
  double d = kInf;
  for (size_t v = 1; v < min_cost.size(); ++v) d = std::min(d, min_cost[v]);
  return d;
}

double StabilityProfile::LadderA(double k) const {
  double a = 0;
  for (size_t v = 1; v < min_cost.size(); ++v) {
    if (min_cost[v] <= k) a = static_cast<double>(v);
  }
  return a;
}

double StabilityProfile::SmoothSensitivity(double beta) const {
  double ss = 0;
  for (size_t v = 1; v < min_cost.size(); ++v) {
    if (std::isfinite(min_cost[v])) {
      ss = std::max(ss, std::exp(-beta * min_cost[v]) * static_cast<double>(v));
    }
  }
  return ss;
}

absl::StatusOr<StabilityProfile> ComputeStability(const StatisticKind& kind,
                                                  const Histogram& x) {
  auto value = ExtendedStatistic(kind, x);
  if (!value.ok()) return value.status();
  const int bars = *DomainBars(x);
  const std::vector<int64_t> h = x.Bars(bars);
  StabilityProfile p{*value, std::vector<double>(bars, kInf)};
  p.min_cost[0] = 0;
  if (kind.type == StatisticKind::Type::kMode) {
    ModeCosts(h, &p.min_cost);
  } else {
    MaxKCosts(h, kind.type == StatisticKind::Type::kMax ? 1 : kind.k,
              &p.min_cost);
  }
  return p;
}

std::vector<double> ExpMechWeights(int64_t value, int bars, double epsilon) {
  std::vector<double> w(bars);
  for (int r = 0; r < bars; ++r) {
    w[r] = std::exp(-epsilon * std::abs(static_cast<double>(value - r)) /
                    (2.0 * bars));
  }
  return w;
}

absl::StatusOr<int64_t> ExpMech(const StatisticKind& kind, const Histogram& x,
                                double epsilon, RngStream& rng) {
  if (!(epsilon >= 0)) return absl::InvalidArgumentError("epsilon must be >= 0");
  auto value = ExtendedStatistic(kind, x);
  if (!value.ok()) return value.status();
  return SampleIndex(ExpMechWeights(*value, *DomainBars(x), epsilon), rng);
}

absl::StatusOr<double> PtrMech(const StabilityProfile& profile, int bars,
                               double epsilon, double delta, RngStream& rng) {
  if (auto s = CheckPrivacy(epsilon, delta); !s.ok()) return s;
  const double noisy =
      profile.DistanceToInstability() + rng.Laplace(1 / epsilon);
  if (noisy > std::log(1 / delta) / epsilon) {
    return static_cast<double>(profile.value);
  }
  return static_cast<double>(rng.UniformInt(bars));
}

absl::StatusOr<double> PtrMech(const StatisticKind& kind, const Histogram& x,
                               double epsilon, double delta, RngStream& rng) {
  auto profile = ComputeStability(kind, x);
  if (!profile.ok()) return profile.status();
  return PtrMech(*profile, *DomainBars(x), epsilon, delta, rng);
}

double SmoothingBeta(double epsilon, double delta) {
  return epsilon / (2 * std::log(2 / delta));
}

absl::StatusOr<double> SsMech(const StabilityProfile& profile, double epsilon,
                              double delta, RngStream& rng) {
  if (auto s = CheckPrivacy(epsilon, delta); !s.ok()) return s;
  const double ss = profile.SmoothSensitivity(SmoothingBeta(epsilon, delta));
  return static_cast<double>(profile.value) + 2 * ss / epsilon * rng.Laplace(1);
}

absl::StatusOr<double> SsMech(const StatisticKind& kind, const Histogram& x,
                              double epsilon, double delta, RngStream& rng) {
  auto profile = ComputeStability(kind, x);
  if (!profile.ok()) return profile.status();
  return SsMech(*profile, epsilon, delta, rng);
}

double BnsThreshold(double epsilon, double delta) {
  return 1 + 2 * std::log(2 / delta) / epsilon;
}

absl::StatusOr<Histogram> BnsHist(const Histogram& x, double epsilon,
                                  double delta, RngStream& rng) {
  if (auto s = CheckPrivacy(epsilon, delta); !s.ok()) return s;
  const double threshold = BnsThreshold(epsilon, delta);
  Histogram y(x.space());
  for (const auto& [g, c] : x.entries()) {
    const double noisy = static_cast<double>(c) + rng.Laplace(2 / epsilon);
    if (noisy > threshold) y.Set(g, static_cast<int64_t>(std::round(noisy)));
  }
  return y;
}

absl::StatusOr<Histogram> SanPoints(const Histogram& x, double epsilon,
                                    double delta, int k_rounds,
                                    RngStream& rng) {
  if (auto s = CheckPrivacy(epsilon, delta); !s.ok()) return s;
  auto bars = DomainBars(x);
  if (!bars.ok()) return bars.status();
  if (k_rounds < 1 || k_rounds > *bars) {
    return absl::InvalidArgumentError("k_rounds must be in [1, bars]");
  }
  if (x.empty()) return Histogram(x.space());
  const std::vector<int64_t> h = x.Bars(*bars);
  const double pick_eps = epsilon / (2.0 * k_rounds);
  const double noise_scale = 2.0 * k_rounds / epsilon;
  std::vector<bool> taken(*bars, false);
  Histogram y(x.space());
  for (int round = 0; round < k_rounds; ++round) {
    double top = -kInf;
    for (int i = 0; i < *bars; ++i) {
      if (!taken[i]) top = std::max(top, static_cast<double>(h[i]));
    }
    std::vector<double> w(*bars, 0.0);
    for (int i = 0; i < *bars; ++i) {
      if (!taken[i]) w[i] = std::exp(pick_eps * (h[i] - top) / 2);
    }
    const int64_t pick = SampleIndex(w, rng);
    taken[pick] = true;
    const double noisy = static_cast<double>(h[pick]) + rng.Laplace(noise_scale);
    const int64_t v = static_cast<int64_t>(std::round(std::max(0.0, noisy)));
    if (v > 0) y.Set(GroundPoint(static_cast<double>(pick)), v);
  }
  return y;
}

}  // namespace flexacc
