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

// Shifted-truncated Laplace noise, the emptiness mechanism, bucketing and the
// BucketHist mechanism with histogram-based post-processing.

#ifndef FLEXACC_MECHANISMS_H_
#define FLEXACC_MECHANISMS_H_

#include <cstdint>
#include <optional>
#include <vector>

#include "absl/status/statusor.h"
#include "flexacc/histogram.h"
#include "flexacc/rng.h"

namespace flexacc {

// Laplace(-q/2, 1/epsilon) restricted to [-q, 0]. q = 0 is the point mass at
// 0 (no noise).
struct NoiseSpec {
  double q = 0;
  double epsilon = 1;

  // InvalidArgument unless q > 0 and epsilon > 0.
  static absl::StatusOr<NoiseSpec> Create(double q, double epsilon);
};

// p_k = delta (e^{k eps} - 1) / (e^eps - 1) for k <= q/2, p_k = 1 - p_{q-k}
// otherwise. With check_pareto, requires
// delta (e^{eps q/2} - 1) / (e^eps - 1) = 1/2 within 1e-9.
absl::StatusOr<std::vector<double>> EmptinessProbs(int q, double epsilon,
                                                   double delta,
                                                   bool check_pareto = true);

// The delta making (q, epsilon, delta) pareto-consistent.
double ParetoDelta(int q, double epsilon);

// P(z <= t) for z ~ sigma.
double TrlapCdf(const NoiseSpec& spec, double t);

// Inverse-CDF draw from sigma, in [-q, 0].
double TrlapSample(const NoiseSpec& spec, RngStream& rng);

// Law of max(0, round(k + z)) over {0..k}.
std::vector<double> TrlapOutputPmf(int64_t k, const NoiseSpec& spec);

// Round half away from zero.
int64_t RoundHalfAway(double v);

// For every nonzero bar: y(g) = max(0, round(x(g) + z_g)) with z_g ~ sigma at
// q = tau |x|. InvalidArgument for empty x or tau outside [0, 1).
absl::StatusOr<Histogram> MechTrlap(const Histogram& x, double tau,
                                    double epsilon, RngStream& rng);

// Largest number of elements MechTrlap can drop: sum over the support of
// min(x(g), floor(q + 1/2)).
int64_t TrlapMaxDrop(const Histogram& x, double tau);

// Axis-aligned buckets of width w over [0,B)^d, ceil(B/w) per axis.
class BucketSpec {
 public:
  // InvalidArgument unless w > 0, bound > 0, dim >= 1.
  static absl::StatusOr<BucketSpec> Create(double w, double bound, int dim);

  double w() const { return w_; }
  double bound() const { return bound_; }
  int dim() const { return dim_; }
  int64_t per_axis() const { return per_axis_; }
  // per_axis^dim.
  double t() const;

  // Center of the bucket containing p; InvalidArgument outside [0,B)^d.
  absl::StatusOr<GroundPoint> CenterOf(const GroundPoint& p) const;
  // All bucket centers (per_axis^dim points).
  std::vector<GroundPoint> Centers() const;

 private:
  BucketSpec(double w, double bound, int dim, int64_t per_axis)
      : w_(w), bound_(bound), dim_(dim), per_axis_(per_axis) {}

  double AxisCenter(int64_t i) const;

  double w_;
  double bound_;
  int dim_;
  int64_t per_axis_;
};

// Moves every element of x to its bucket center.
absl::StatusOr<Histogram> MechBucket(const Histogram& x,
                                     const BucketSpec& spec);

// BucketHist parameters. The bucket width is w = 2 beta / sqrt(d), so the
// bucketing error is beta; t = ceil(B/w)^d and tau = alpha / t.
class MechParams {
 public:
  // InvalidArgument unless alpha in [0,1), beta > 0, epsilon > 0, bound > 0,
  // dim >= 1.
  static absl::StatusOr<MechParams> Create(double alpha, double beta,
                                           double epsilon, double bound,
                                           int dim = 1);

  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double epsilon() const { return epsilon_; }
  const BucketSpec& buckets() const { return buckets_; }
  double w() const { return buckets_.w(); }
  double t() const { return buckets_.t(); }
  double tau() const { return alpha_ / buckets_.t(); }

 private:
  MechParams(double alpha, double beta, double epsilon, BucketSpec buckets)
      : alpha_(alpha), beta_(beta), epsilon_(epsilon), buckets_(buckets) {}

  double alpha_;
  double beta_;
  double epsilon_;
  BucketSpec buckets_;
};

// MechTrlap(MechBucket(x), tau, epsilon).
absl::StatusOr<Histogram> MechBucketHist(const Histogram& x,
                                         const MechParams& p, RngStream& rng);

// The statistic of the BucketHist release. nullopt marks an undefined release
// (empty output, or MaxK without a qualifying bar).
absl::StatusOr<std::optional<StatisticValue>> MechHbs(const StatisticKind& kind,
                                                      const Histogram& x,
                                                      const MechParams& p,
                                                      RngStream& rng);

// The statistic of a released histogram; nullopt when undefined.
absl::StatusOr<std::optional<StatisticValue>> StatisticOfRelease(
    const StatisticKind& kind, const Histogram& released);

}  // namespace flexacc

#endif  // FLEXACC_MECHANISMS_H_
