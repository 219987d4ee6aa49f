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

// Ground-truth checks: exact privacy curves on tiny domains, flexible error
// under a drop budget, and brute-force transport oracles.

#ifndef FLEXACC_AUDIT_H_
#define FLEXACC_AUDIT_H_

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "absl/status/statusor.h"
#include "flexacc/histogram.h"
#include "flexacc/transport.h"

namespace flexacc {

// Joint output spaces larger than this are rejected.
inline constexpr double kAuditOutputGuard = 1e6;

// A pair of neighboring histograms released by the truncated Laplace
// mechanism with q = tau |input| for each input.
class AuditInstance {
 public:
  // InvalidArgument unless x ~ x_prime, both are non-empty and tau in [0,1);
  // ResourceExhausted ("instance too large") above the output guard.
  static absl::StatusOr<AuditInstance> Create(const Histogram& x,
                                              const Histogram& x_prime,
                                              double tau);

  const Histogram& x() const { return x_; }
  const Histogram& x_prime() const { return x_prime_; }
  double tau() const { return tau_; }

  // Per-bar output pmfs over the union support, for x (first) or x_prime.
  std::vector<std::vector<double>> BarPmfs(bool first, double epsilon) const;

 private:
  AuditInstance(Histogram x, Histogram x_prime, double tau,
                std::vector<GroundPoint> bars)
      : x_(std::move(x)),
        x_prime_(std::move(x_prime)),
        tau_(tau),
        bars_(std::move(bars)) {}

  Histogram x_;
  Histogram x_prime_;
  double tau_;
  std::vector<GroundPoint> bars_;
};

// sum over joint outputs of [P(y) - e^eps Q(y)]_+ for product laws given by
// per-bar pmfs (a missing tail of a shorter pmf has probability 0).
absl::StatusOr<double> TightDeltaProduct(
    const std::vector<std::vector<double>>& p,
    const std::vector<std::vector<double>>& q, double epsilon);

// Max over both orderings of the tight delta at epsilon.
absl::StatusOr<double> DpDeltaExact(const AuditInstance& inst, double epsilon);

// Elements that may be dropped under a budget: floor(budget n + 1e-9).
int64_t DropAllowance(double budget, int64_t n);

// Distance between statistic values: |a - b| for scalars, dsupp for sets.
absl::StatusOr<double> StatisticDistance(const StatisticValue& a,
                                         const StatisticValue& b);

// min over x' <= x with drop(x, x') <= budget and f(x') defined of the
// distance between f(x') and the release. An undefined release, or no witness
// with a defined statistic, scores the domain bound B. Exact routines for Max,
// Min, MaxK and Mode; Support falls back to brute force.
absl::StatusOr<double> FlexibleError(
    const StatisticKind& kind, const Histogram& x,
    const std::optional<StatisticValue>& released, double budget);

// Enumerates every x' <= x within the budget (guarded by the output guard).
absl::StatusOr<double> BruteFlexibleError(
    const StatisticKind& kind, const Histogram& x,
    const std::optional<StatisticValue>& released, double budget);

// y <= x pointwise and |x| - |y| <= DropAllowance(budget, |x|).
bool CheckDropWitness(const Histogram& x, const Histogram& y, double budget);

// W-infinity with loss gamma by linear programming over lossy couplings on
// the union support, scanned over candidate distances. At most 4 atoms per
// side.
absl::StatusOr<double> BruteWinfLossy(const DiscreteDistribution& p,
                                      const DiscreteDistribution& q,
                                      double gamma);

// Lossy average Wasserstein distance by linear programming over lossy
// couplings on the union support. At most 4 atoms per side.
absl::StatusOr<double> BruteWAvgLossy(const DiscreteDistribution& p,
                                      const DiscreteDistribution& q,
                                      double theta);

}  // namespace flexacc

#endif  // FLEXACC_AUDIT_H_
