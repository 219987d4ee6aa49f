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

// Comparison mechanisms over the integer domain {0, ..., B-1}: exponential
// mechanism, propose-test-release, smooth sensitivity, stability-based
// histogram release and iterative bar selection.

#ifndef FLEXACC_BASELINES_H_
#define FLEXACC_BASELINES_H_

#include <cstdint>
#include <string>
#include <vector>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "flexacc/histogram.h"
#include "flexacc/rng.h"

namespace flexacc {

enum class BaselineKind { kExponential, kPtr, kSmoothSensitivity, kBns, kSanPoints };

// "exponential", "ptr", "smooth_sensitivity", "bns", "sanpoints".
std::string BaselineName(BaselineKind kind);
absl::StatusOr<BaselineKind> ParseBaselineKind(absl::string_view s);

// Number of bars B of a 1-D integral domain; InvalidArgument otherwise.
absl::StatusOr<int> DomainBars(const Histogram& x);

// Max, MaxK or Mode extended to every histogram: no qualifying bar gives 0,
// Mode is the argmax over bars 0..B-1 with ties to the smallest bar.
absl::StatusOr<int64_t> ExtendedStatistic(const StatisticKind& kind,
                                          const Histogram& x);

// Stability of the extended statistic around x. min_cost[v] is the least L1
// distance from x to some x' having a neighbor x'' with
// |f(x') - f(x'')| = v (+inf if none); the local sensitivity, the distance to
// instability, the ladder A^(k) and the smooth sensitivity all derive from it.
struct StabilityProfile {
  int64_t value = 0;
  std::vector<double> min_cost;

  double LocalSensitivity() const;
  // min over v >= 1 of min_cost[v].
  double DistanceToInstability() const;
  // max LS(x') over x' within L1 distance k.
  double LadderA(double k) const;
  // max over x' of LS(x') e^{-beta d(x, x')}.
  double SmoothSensitivity(double beta) const;
};

// Max, MaxK and Mode only.
absl::StatusOr<StabilityProfile> ComputeStability(const StatisticKind& kind,
                                                  const Histogram& x);

// Weights exp(-eps |f(x) - r| / (2B)) over r in {0..B-1}.
std::vector<double> ExpMechWeights(int64_t value, int bars, double epsilon);

absl::StatusOr<int64_t> ExpMech(const StatisticKind& kind, const Histogram& x,
                                double epsilon, RngStream& rng);

// Releases f(x) when the distance to instability plus Lap(1/eps) exceeds
// ln(1/delta)/eps, otherwise a uniform value of {0..B-1}.
absl::StatusOr<double> PtrMech(const StabilityProfile& profile, int bars,
                               double epsilon, double delta, RngStream& rng);
absl::StatusOr<double> PtrMech(const StatisticKind& kind, const Histogram& x,
                               double epsilon, double delta, RngStream& rng);

// eps / (2 ln(2/delta)).
double SmoothingBeta(double epsilon, double delta);

// f(x) + (2 SS / eps) Lap(1), SS at the smoothing beta.
absl::StatusOr<double> SsMech(const StabilityProfile& profile, double epsilon,
                              double delta, RngStream& rng);
absl::StatusOr<double> SsMech(const StatisticKind& kind, const Histogram& x,
                              double epsilon, double delta, RngStream& rng);

// 1 + 2 ln(2/delta) / eps.
double BnsThreshold(double epsilon, double delta);

// Every nonzero bar gets Lap(2/eps) noise and is reported (rounded) only
// above BnsThreshold.
absl::StatusOr<Histogram> BnsHist(const Histogram& x, double epsilon,
                                  double delta, RngStream& rng);

// k_rounds picks without replacement by the exponential mechanism (utility:
// bar height, budget eps/(2k) per pick); each picked bar is reported with
// Lap(2k/eps) noise, clamped at 0 and rounded.
absl::StatusOr<Histogram> SanPoints(const Histogram& x, double epsilon,
                                    double delta, int k_rounds,
                                    RngStream& rng);

}  // namespace flexacc

#endif  // FLEXACC_BASELINES_H_
