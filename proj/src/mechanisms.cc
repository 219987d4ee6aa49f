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

#include "flexacc/mechanisms.h"

#include <algorithm>
#include <cmath>
#include <utility>

#include "absl/strings/str_cat.h"

namespace flexacc {
namespace {

double RoundCenter(double v) { return std::round(v * 1e12) / 1e12; }

}  // namespace

absl::StatusOr<NoiseSpec> NoiseSpec::Create(double q, double epsilon) {
  if (!(q > 0) || !std::isfinite(q)) {
    return absl::InvalidArgumentError("noise width q must be > 0");
  }
  if (!(epsilon > 0) || !std::isfinite(epsilon)) {
    return absl::InvalidArgumentError("epsilon must be > 0");
  }
  return NoiseSpec{q, epsilon};
}

double ParetoDelta(int q, double epsilon) {
  return std::expm1(epsilon) / (2 * std::expm1(epsilon * q / 2.0));
}

absl::StatusOr<std::vector<double>> EmptinessProbs(int q, double epsilon,
                                                   double delta,
                                                   bool check_pareto) {
  if (q < 1) return absl::InvalidArgumentError("q must be >= 1");
  if (!(epsilon > 0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (!(delta > 0)) return absl::InvalidArgumentError("delta must be > 0");
  const double ratio = std::expm1(epsilon);
  if (check_pareto) {
    const double lhs = delta * std::expm1(epsilon * q / 2.0) / ratio;
    if (std::abs(lhs - 0.5) > 1e-9) {
      return absl::InvalidArgumentError(absl::StrCat(
          "(epsilon, delta, q) is not pareto-consistent: ", lhs, " != 1/2"));
    }
  }
  std::vector<double> p(q + 1);
  for (int k = 0; 2 * k <= q; ++k) {
    p[k] = delta * std::expm1(k * epsilon) / ratio;
  }
  for (int k = 0; k <= q; ++k) {
    if (2 * k > q) p[k] = 1 - p[q - k];
  }
  return p;
}

double TrlapCdf(const NoiseSpec& spec, double t) {
  if (t >= 0) return 1;
  if (t <= -spec.q) return 0;
  const double eps = spec.epsilon;
  const double mean = -spec.q / 2;
  const double tail = std::exp(-eps * spec.q / 2);
  const double norm = -std::expm1(-eps * spec.q / 2);
  if (t <= mean) {
    return (0.5 * std::exp(eps * (t - mean)) - 0.5 * tail) / norm;
  }
  return (1 - 0.5 * std::exp(-eps * (t - mean)) - 0.5 * tail) / norm;
}

double TrlapSample(const NoiseSpec& spec, RngStream& rng) {
  if (spec.q <= 0) return 0;
  const double c = rng.Uniform01();
  const double eps = spec.epsilon;
  const double mean = -spec.q / 2;
  const double tail = std::exp(-eps * spec.q / 2);
  const double norm = -std::expm1(-eps * spec.q / 2);
  double t;
  if (c <= 0.5) {
    t = mean + std::log(2 * c * norm + tail) / eps;
  } else {
    t = mean - std::log(2 * (1 - c * norm) - tail) / eps;
  }
  return std::clamp(t, -spec.q, 0.0);
}

std::vector<double> TrlapOutputPmf(int64_t k, const NoiseSpec& spec) {
  std::vector<double> pmf(k + 1, 0.0);
  if (k == 0) {
    pmf[0] = 1;
    return pmf;
  }
  const double kd = static_cast<double>(k);
  pmf[0] = TrlapCdf(spec, 0.5 - kd);
  for (int64_t j = 1; j < k; ++j) {
    pmf[j] = TrlapCdf(spec, j + 0.5 - kd) - TrlapCdf(spec, j - 0.5 - kd);
  }
  pmf[k] = 1 - TrlapCdf(spec, -0.5);
  return pmf;
}

int64_t RoundHalfAway(double v) { return static_cast<int64_t>(std::round(v)); }

absl::StatusOr<Histogram> MechTrlap(const Histogram& x, double tau,
                                    double epsilon, RngStream& rng) {
  if (x.empty()) return absl::InvalidArgumentError("empty input histogram");
  if (!(tau >= 0) || tau >= 1) {
    return absl::InvalidArgumentError("tau must be in [0, 1)");
  }
  if (!(epsilon > 0)) return absl::InvalidArgumentError("epsilon must be > 0");
  const NoiseSpec spec{tau * static_cast<double>(x.size()), epsilon};
  if (spec.q == 0) return x;
  Histogram y(x.space());
  for (const auto& [g, c] : x.entries()) {
    const double z = TrlapSample(spec, rng);
    const int64_t v = std::max<int64_t>(0, RoundHalfAway(c + z));
    if (v > 0) y.Set(g, v);
  }
  return y;
}

int64_t TrlapMaxDrop(const Histogram& x, double tau) {
  const double q = tau * static_cast<double>(x.size());
  const int64_t per_bar = static_cast<int64_t>(std::floor(q + 0.5));
  int64_t total = 0;
  for (const auto& [g, c] : x.entries()) total += std::min(c, per_bar);
  return total;
}

absl::StatusOr<BucketSpec> BucketSpec::Create(double w, double bound,
                                              int dim) {
  if (!(w > 0) || !std::isfinite(w)) {
    return absl::InvalidArgumentError("bucket width must be > 0");
  }
  if (!(bound > 0) || !std::isfinite(bound)) {
    return absl::InvalidArgumentError("domain bound must be > 0");
  }
  if (dim < 1) return absl::InvalidArgumentError("dimension must be >= 1");
  const double ratio = bound / w;
  const double nearest = std::round(ratio);
  const int64_t per_axis =
      std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio)
          ? static_cast<int64_t>(nearest)
          : static_cast<int64_t>(std::ceil(ratio));
  return BucketSpec(w, bound, dim, std::max<int64_t>(per_axis, 1));
}

double BucketSpec::t() const {
  return std::pow(static_cast<double>(per_axis_), dim_);
}

double BucketSpec::AxisCenter(int64_t i) const {
  return RoundCenter(w_ * (static_cast<double>(i) + 0.5));
}

absl::StatusOr<GroundPoint> BucketSpec::CenterOf(const GroundPoint& p) const {
  if (!MetricSpace(dim_, bound_).Contains(p)) {
    return absl::InvalidArgumentError(
        absl::StrCat("point ", ToString(p), " outside the domain"));
  }
  std::vector<double> c(dim_);
  for (int a = 0; a < dim_; ++a) {
    const int64_t i = std::min<int64_t>(
        static_cast<int64_t>(std::floor(p.coords[a] / w_)), per_axis_ - 1);
    c[a] = AxisCenter(i);
  }
  return GroundPoint(std::move(c));
}

std::vector<GroundPoint> BucketSpec::Centers() const {
  std::vector<GroundPoint> out;
  std::vector<int64_t> idx(dim_, 0);
  while (true) {
    std::vector<double> c(dim_);
    for (int a = 0; a < dim_; ++a) c[a] = AxisCenter(idx[a]);
    out.emplace_back(std::move(c));
    int a = dim_ - 1;
    while (a >= 0 && ++idx[a] == per_axis_) idx[a--] = 0;
    if (a < 0) break;
  }
  return out;
}

absl::StatusOr<Histogram> MechBucket(const Histogram& x,
                                     const BucketSpec& spec) {
  if (x.space().dim() != spec.dim()) {
    return absl::InvalidArgumentError("bucket dimension mismatch");
  }
  Histogram y(x.space());
  for (const auto& [g, c] : x.entries()) {
    auto center = spec.CenterOf(g);
    if (!center.ok()) return center.status();
    y.Add(*center, c);
  }
  return y;
}

absl::StatusOr<MechParams> MechParams::Create(double alpha, double beta,
                                              double epsilon, double bound,
                                              int dim) {
  if (!(alpha >= 0) || alpha >= 1) {
    return absl::InvalidArgumentError("alpha must be in [0, 1)");
  }
  if (!(beta > 0)) return absl::InvalidArgumentError("beta must be > 0");
  if (!(epsilon > 0)) return absl::InvalidArgumentError("epsilon must be > 0");
  if (dim < 1) return absl::InvalidArgumentError("dimension must be >= 1");
  auto buckets =
      BucketSpec::Create(2 * beta / std::sqrt(static_cast<double>(dim)), bound,
                         dim);
  if (!buckets.ok()) return buckets.status();
  return MechParams(alpha, beta, epsilon, *buckets);
}

absl::StatusOr<Histogram> MechBucketHist(const Histogram& x,
                                         const MechParams& p, RngStream& rng) {
  auto bucketed = MechBucket(x, p.buckets());
  if (!bucketed.ok()) return bucketed.status();
  return MechTrlap(*bucketed, p.tau(), p.epsilon(), rng);
}

absl::StatusOr<std::optional<StatisticValue>> StatisticOfRelease(
    const StatisticKind& kind, const Histogram& released) {
  if (released.empty()) return std::optional<StatisticValue>();
  auto v = EvalStatistic(kind, released);
  if (absl::IsFailedPrecondition(v.status())) {
    return std::optional<StatisticValue>();
  }
  if (!v.ok()) return v.status();
  return std::optional<StatisticValue>(*std::move(v));
}

absl::StatusOr<std::optional<StatisticValue>> MechHbs(const StatisticKind& kind,
                                                      const Histogram& x,
                                                      const MechParams& p,
                                                      RngStream& rng) {
  auto released = MechBucketHist(x, p, rng);
  if (!released.ok()) return released.status();
  return StatisticOfRelease(kind, *released);
}

}  // namespace flexacc
